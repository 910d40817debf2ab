import inspect
from enum import Enum
from typing import Callable, Dict, Iterable, List, Union


class AnalysisStage(Enum):
    EXPONENT = "exponent"
    VERTICAL_ORDER = "vertical_order"
    DISCREPANCY = "discrepancy"
    CLASSIFY = "classify"


def runtime_hook(stage, trigger="post"):
    """Decorator that allows to call a function or a method
    at one or more specific times during an analysis.

    The decorated function / method must have the following signature:
    ``func(case, context, state)`` or ``meth(self, case, context, state)``.

    Parameters
    ----------
    stage : {'exponent', 'vertical_order', 'discrepancy', 'classify'}
        The analysis stage at which to call the function.
    trigger : {'pre', 'post'}
        Sets when exactly to trigger the function call, i.e., just before
        ('pre') or just after ('post') the stage (default: after).

    """
    stage = AnalysisStage(stage)

    if trigger not in ("pre", "post"):
        raise ValueError("trigger argument must be either 'pre' or 'post'")

    def wrap(func):
        func.__hadalab_hook__ = (stage, trigger)
        return func

    return wrap


def _get_hook_info(func):
    return getattr(func, "__hadalab_hook__", False)


class RuntimeHook:
    """Base class for stateful analysis runtime hooks.

    Given some runtime hook functions, e.g.,

    >>> @runtime_hook('exponent', 'pre')
    ... def start(case, context, state):
    ...     pass

    >>> @runtime_hook('classify', 'post')
    ... def done(case, context, state):
    ...     print(state['classification'])

    You may create a ``RuntimeHook`` object with any number of them

    >>> rh = RuntimeHook(start, done)

    and use it either as a context manager over an analysis

    >>> with rh:
    ...    AnalysisDriver(case).run()

    or enable it globally with the ``register`` method

    >>> rh.register()
    >>> rh.unregister()

    Subclasses may add decorated methods that share some state (see
    :class:`~hadalab.monitoring.ProgressBar`).

    """

    active = set()

    def __init__(self, *args):
        """
        Parameters
        ----------
        *args : callable
            An abitrary number of runtime_hook decorated functions.

        """
        if not all(_get_hook_info(h) for h in args):
            raise TypeError("Arguments must be only runtime_hook decorated functions")

        self._hook_args = args

    def _get_hooks(self):
        hook_methods = [
            m for _, m in inspect.getmembers(self, predicate=_get_hook_info)
        ]

        return getattr(self, "_hook_args", ()) + tuple(hook_methods)

    def register(self):
        """Globally register this RuntimeHook instance."""
        RuntimeHook.active.add(self)

    def unregister(self):
        """Globally unregister this RuntimeHook instance."""
        RuntimeHook.active.remove(self)

    def __enter__(self):
        self.register()
        return self

    def __exit__(self, typ, value, traceback):
        self.unregister()


def flatten_hooks(objects: Iterable[Union[RuntimeHook, Callable]]) -> List[Callable]:
    """Return a flat list of runtime hook functions from a sequence of
    runtime hook decorated functions or RuntimeHook objects.

    """
    hooks = []

    for obj in objects:
        if isinstance(obj, RuntimeHook):
            hooks += list(obj._get_hooks())
        elif _get_hook_info(obj):
            hooks.append(obj)
        else:
            raise TypeError(
                f"{obj!r} is not a RuntimeHook object nor a runtime_hook decorated function"
            )

    return hooks


def group_hooks(
    hooks: Iterable[Callable],
) -> Dict[AnalysisStage, Dict[str, List[Callable]]]:
    """Group a flat sequence of runtime hook functions by
    analysis stage -> trigger (pre/post)

    """
    grouped = {}

    for h in hooks:
        stage, trigger = h.__hadalab_hook__
        grouped.setdefault(stage, {}).setdefault(trigger, []).append(h)

    return grouped
