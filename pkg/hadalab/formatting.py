"""Formatting utils and functions."""
import numpy as np

from .utils import is_sentinel


def _calculate_col_width(col_items):
    max_name_length = max((len(s) for s in col_items)) if col_items else 0
    col_width = max(max_name_length, 7) + 6
    return col_width


def pretty_print(s, numchars):
    """Format the returned string so that it is numchars long,
    padding with trailing spaces or truncating with ellipses as
    necessary.
    """
    s = maybe_truncate(s, numchars)
    return s + " " * max(numchars - len(s), 0)


def maybe_truncate(s, maxlen=500):
    if len(s) > maxlen:
        s = s[: (maxlen - 3)] + "..."
    return s


def wrap_indent(text, start="", length=None):
    if length is None:
        length = len(start)
    indent = "\n" + " " * length
    return start + indent.join(x for x in text.splitlines())


def format_complex(z, precision=6):
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.{precision}g}"
    return f"{z.real:.{precision}g}{z.imag:+.{precision}g}j"


def _summarize_items(items, col_width, max_line_length=70):
    lines = []
    for name, value in items:
        left_col = pretty_print(f"    {name}", col_width)
        lines.append(left_col + maybe_truncate(str(value), max_line_length - col_width))
    return lines


def repr_divisor(div, n_preview=4):
    from .divisor import total_origin_mult

    header = f"<hadalab.{type(div).__name__} ({div.kind.value})>"

    items = []
    if div.is_finite:
        items.append(("points", len(div.points_within(np.inf)[0])))
    origin = total_origin_mult(div)
    if origin:
        items.append(("origin", origin))
    if div.declared_sigma1 is not None:
        items.append(("sigma1", div.declared_sigma1))

    model = div.effective_tail_model()
    if model is not None:
        const = "C" if model.constant is None else f"{model.constant:.4g}"
        items.append(("tail", f"N(r) ~ {const} r^{model.alpha:g}"))

    rho, mult = div.points(n_preview + 1)
    preview = ", ".join(
        f"{format_complex(r, 4)} ({int(m):+d})" for r, m in zip(rho[:n_preview], mult)
    )
    if rho.size > n_preview:
        preview += ", ..."
    items.append(("first", preview or "*empty*"))

    col_width = _calculate_col_width([name for name, _ in items])
    return "\n".join([header] + _summarize_items(items, col_width)) + "\n"


def repr_measure(mu, n_preview=6):
    header = f"<hadalab.AtomicMeasure ({len(mu)} atoms, cutoff={mu.cutoff:g})>"
    if not len(mu):
        return header + "\n    *empty*\n"

    lines = []
    for freq, mass in list(mu)[:n_preview]:
        lines.append(pretty_print(f"    {freq:.6g}", 16) + format_complex(mass))
    if len(mu) > n_preview:
        lines.append("    ...")
    return "\n".join([header] + lines) + "\n"


def repr_report(report):
    header = f"<hadalab.AnalysisReport {report.case_name!r}>"

    def fmt(value):
        return str(value) if is_sentinel(value) else value

    sections = {
        "Divisor:": [
            ("d", report.d),
            ("sigma1", f"{report.sigma1:g}" + ("" if report.sigma1_exact else " (lower bound)")),
            ("genus_H", report.hadamard_genus),
            ("order_lb", report.order_lower_bound),
        ],
        "Vertical order:": [
            ("m0", fmt(report.m0)),
            ("lines", len(report.line_results)),
        ],
        "Discrepancy:": [
            ("gW", fmt(report.gW)),
            ("coeffs", ", ".join(format_complex(c) for c in report.coeffs) or "*none*"),
            ("genus", fmt(report.genus)),
        ],
        "Classification:": [("type", report.classification.value)],
    }

    col_width = _calculate_col_width(
        [name for items in sections.values() for name, _ in items]
    )

    lines = [header]
    for title, items in sections.items():
        lines.append(title)
        lines += _summarize_items(items, col_width)

    if report.diagnostics:
        lines.append("Diagnostics:")
        lines += [wrap_indent(maybe_truncate(d, 200), "    - ") for d in report.diagnostics]

    return "\n".join(lines) + "\n"
