"""Output writers. Every file starts with (CSV) or carries (JSON) the manifest hash."""

from __future__ import print_function, division
import csv
import io
import json
import numpy as np

MEASUREMENT_COLUMNS = [
    "n", "t", "G", "G_lower", "G_upper", "Hminus1", "LS", "alpha", "mixed_level",
    "predicted_level", "Wsp",
    ]


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return "%d" % value
    return "%.12g" % float(value)


def _write_csv(path, tag, header, rows):
    buffer = io.StringIO()
    buffer.write("# manifest %s\n" % tag)
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    text = buffer.getvalue()
    if path is None:
        return text
    with open(path, "w") as f:
        f.write(text)
    return text


def measurement_rows(snapshots, stage_norms=None):
    rows = []
    for snap in snapshots:
        m = snap.measurements
        G = m.get("G")
        wsp = None
        if stage_norms is not None and snap.n >= 1:
            wsp = stage_norms[snap.n - 1]
        rows.append([
            snap.n, snap.t,
            None if G is None else G.value, None if G is None else G.lower,
            None if G is None else G.upper, m.get("Hminus1"), m.get("LS"), m.get("alpha"),
            m.get("mixed_level"), m.get("predicted_level"), wsp,
            ])
    return rows


def write_measurements(path, snapshots, tag, stage_norms=None):
    """``t, G brackets, H^-1, LS, mixed level, W^{s,p}`` per snapshot; Wsp is the norm of
    the stage velocity that produced the snapshot"""
    return _write_csv(path, tag, MEASUREMENT_COLUMNS, measurement_rows(snapshots, stage_norms))


def write_field_measurements(path, rows, tag):
    """Rows of ``quantity, level_or_radius, value, lower_bracket, upper_bracket``"""
    header = ["quantity", "level_or_radius", "value", "lower_bracket", "upper_bracket"]
    return _write_csv(path, tag, header, rows)


def write_schedule(path, schedule, tag):
    rows = [[n, schedule.times[n], schedule.tau(n)] for n in range(schedule.stages)]
    rows.append([schedule.stages, schedule.times[-1], None])
    return _write_csv(path, tag, ["n", "T_n", "tau_n"], rows)


def _plain(value):
    if isinstance(value, dict):
        return dict((str(k), _plain(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "to_dict"):
        return _plain(value.to_dict())
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def write_json(path, payload, tag):
    """Sorted-key JSON with the manifest hash under ``manifest_hash``"""
    document = {"manifest_hash": tag, "data": _plain(payload)}
    text = json.dumps(document, sort_keys=True, indent=2) + "\n"
    if path is not None:
        with open(path, "w") as f:
            f.write(text)
    return text


def plot_decay(path, samples, fits, tag, label="H^-1"):
    """Semi-log and log-log panels of a mixing series with both fitted laws"""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except:
        raise ImportError('Could not import matplotlib')

    plt.rcParams.update({
        "svg.hashsalt": tag,
        "font.size": 10,
        "lines.linewidth": 1.5,
        "figure.figsize": [10, 4],
        })
    t = np.array([s[0] for s in samples])
    mix = np.array([s[1] for s in samples])
    fig, (semilog, loglog) = plt.subplots(1, 2)
    semilog.semilogy(t, mix, "o-", label=label)
    positive = t > 0
    loglog.loglog(t[positive], mix[positive], "o-", label=label)
    if fits is not None:
        exp_fit, poly_fit = fits["exponential"], fits["polynomial"]
        tw = np.linspace(exp_fit.window[0], exp_fit.window[1], 50)
        anchor = mix[t >= exp_fit.window[0]]
        t0 = exp_fit.window[0]
        semilog.semilogy(tw, anchor[0] * np.exp(-exp_fit.rate_or_exponent * (tw - t0)), "--",
                         label="exp, rate %.3g" % exp_fit.rate_or_exponent)
        loglog.loglog(tw, anchor[0] * (tw / t0) ** poly_fit.rate_or_exponent, "--",
                      label="power, exponent %.3g" % poly_fit.rate_or_exponent)
    semilog.set_xlabel("t")
    loglog.set_xlabel("t")
    semilog.set_ylabel(label)
    semilog.legend()
    loglog.legend()
    fig.suptitle("manifest %s" % tag[:12])
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
