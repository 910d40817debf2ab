from hadalab.hook import AnalysisStage, RuntimeHook, runtime_hook


__all__ = ("ProgressBar",)


class ProgressBar(RuntimeHook):
    """
    Progress bar implementation using the tqdm package.

    Examples
    --------
    ProgressBar takes full advantage of :class:`RuntimeHook`.

    Pass it to an analysis driver:

    >>> from hadalab.monitoring import ProgressBar
    >>> report = AnalysisDriver(case, hooks=[ProgressBar()]).run()

    In a context manager using the ``with`` statement:

    >>> with ProgressBar():
    ...    report = AnalysisDriver(case).run()

    """

    def __init__(self, frontend="auto", **kwargs):
        """
        Parameters
        ----------
        frontend : {"auto", "console", "gui", "notebook"}, optional
            Selects a frontend for displaying the progress bar. By default ("auto"),
            the frontend is chosen by guessing in which environment the analysis
            is run. The "console" frontend displays an ascii progress bar, while the
            "gui" frontend is based on matplotlib and the "notebook" frontend is based
            on ipywidgets.
        **kwargs : dict, optional
            Arbitrary keyword arguments for progress bar customization.
            See https://tqdm.github.io/docs/tqdm/.

        """
        if frontend == "auto":
            from tqdm.auto import tqdm
        elif frontend == "console":
            from tqdm import tqdm
        elif frontend == "gui":
            from tqdm.gui import tqdm
        elif frontend == "notebook":
            from tqdm.notebook import tqdm
        else:
            raise ValueError(
                f"Frontend argument {frontend!r} not supported. "
                "Please select one of the following: "
                + ", ".join(["auto", "console", "gui", "notebook"])
            )

        self.custom_description = "desc" in kwargs

        self.tqdm = tqdm
        self.tqdm_kwargs = {"bar_format": "{bar} {percentage:3.0f}% | {desc} "}
        self.tqdm_kwargs.update(kwargs)

    def _describe(self, stage):
        if not self.custom_description:
            self.pbar.set_description_str(stage.value.replace("_", " "))

    @runtime_hook("exponent", trigger="pre")
    def init_bar(self, case, context, state):
        self.tqdm_kwargs.update(total=len(AnalysisStage))
        if not self.custom_description:
            self.tqdm_kwargs.update(desc=f"analyze {context['case_name']}")
        self.pbar = self.tqdm(**self.tqdm_kwargs)
        self._describe(AnalysisStage.EXPONENT)

    @runtime_hook("exponent", trigger="post")
    def update_exponent(self, case, context, state):
        self.pbar.update(1)

    @runtime_hook("vertical_order", trigger="pre")
    def start_vertical_order(self, case, context, state):
        self._describe(AnalysisStage.VERTICAL_ORDER)

    @runtime_hook("vertical_order", trigger="post")
    def update_vertical_order(self, case, context, state):
        self.pbar.update(1)

    @runtime_hook("discrepancy", trigger="pre")
    def start_discrepancy(self, case, context, state):
        self._describe(AnalysisStage.DISCREPANCY)

    @runtime_hook("discrepancy", trigger="post")
    def update_discrepancy(self, case, context, state):
        self.pbar.update(1)

    @runtime_hook("classify", trigger="post")
    def close_bar(self, case, context, state):
        self.pbar.update(1)
        elapsed_time = self.tqdm.format_interval(self.pbar.format_dict["elapsed"])
        if not self.custom_description:
            self.pbar.set_description_str(f"Analysis finished in {elapsed_time}")
        self.pbar.close()
