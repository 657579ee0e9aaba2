"""Command-line front end.

    diagcsim run <config> [--out DIR] [--seed N]
    diagcsim sweep-step <config> [--steps 0,3,6,9,12,15] [--ramp DB] [--out DIR]
    diagcsim compare <config> [--out DIR] [--seed N]

Exit status: 0 success, 1 configuration/validation error, 2 runtime error.
"""
import argparse
import os
import shutil
import sys
import tempfile

import numpy as np

from .config import load_config
from .exceptions import ConfigurationError
from .metrics import sweep_step_distortion
from .pipeline import simulate_dwell
from .report import write_csv
from .waveform import generate

COMPARE_VARIANTS = ("diagc_on", "diagc_off", "stc_only")
METRIC_HEADER = ["variant", "pulse_width_bins", "peak_sidelobe_db", "residue_power_db",
                 "gain_control_depth_db", "detections_count", "saturation_counts"]


def build_parser():
    p = argparse.ArgumentParser(prog="diagcsim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("config")
        sp.add_argument("--out", default="out", help="output directory (default: out)")
        sp.add_argument("--seed", type=int, default=None, help="override scenario.rng_seed")

    common(sub.add_parser("run", help="simulate the configured variants"))
    sw = sub.add_parser("sweep-step", help="step attenuation vs pulse compression")
    common(sw)
    sw.add_argument("--steps", default="0,3,6,9,12,15", help="comma-separated steps in dB")
    sw.add_argument("--ramp", type=float, default=None,
                    help="ramp rate in dB/bin (default: diagc.slew_db_per_bin)")
    common(sub.add_parser("compare", help="diagc_on vs diagc_off vs stc_only"))
    return p


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _metric_row(variant, m):
    return [variant, m.pulse_width_bins, m.peak_sidelobe_db, m.residue_power_db,
            m.gain_control_depth_db, m.detections_count,
            ";".join(str(c) for c in m.saturation_counts)]


def _write_variant(outdir, cfg, res, chash, seed):
    vdir = os.path.join(outdir, res.variant)
    os.makedirs(vdir, exist_ok=True)
    prot = cfg.receiver.protected_stage
    sp = cfg.sigproc
    rows = []
    for k, (out, sched, comp) in enumerate(zip(res.outputs, res.schedules, res.compressed), 1):
        pre = np.abs(out.trace.pre_clip[prot])
        post = np.abs(out.trace.outputs[prot])
        cmag = np.abs(comp.samples)
        resid = res.residual_for_prt(k, sp.skip_first, sp.order)
        rmag = None if resid is None else np.abs(resid)
        for b in range(len(pre)):
            rows.append([k, b, pre[b], post[b], out.sense_codes[b], sched.words[b],
                         sched.db[b], cmag[b], None if rmag is None else rmag[b]])
    write_csv(os.path.join(vdir, "trace.csv"),
              ["prt", "bin", "pre_clip", "post_clip", "sense_code", "word", "db",
               "compressed_mag", "residual_mag"], rows, chash, seed)
    rows = []
    for t in res.card_traces:
        for b in range(len(t.adc_code)):
            rows.append([t.prt_index, b, t.adc_code[b], t.moving_avg[b], t.stored[b],
                         t.words[b], t.db[b]])
    write_csv(os.path.join(vdir, "diagc_trace.csv"),
              ["prt", "bin", "adc_code", "moving_avg", "stored", "word", "db"], rows, chash, seed)
    write_csv(os.path.join(vdir, "detections.csv"), ["dwell", "range_bin", "magnitude"],
              [[res.report.dwell_index, b, m] for b, m in res.report.detections], chash, seed)


def cmd_run(cfg, outdir, chash, seed):
    results = [simulate_dwell(cfg, v) for v in cfg.variants]
    for res in results:
        _write_variant(outdir, cfg, res, chash, seed)
    write_csv(os.path.join(outdir, "metrics.csv"), METRIC_HEADER,
              [_metric_row(r.variant, r.metrics) for r in results], chash, seed)
    return results


def saturating_zone(result, stage, pad):
    """Bins clipped at ``stage`` in any PRT, widened by ``pad`` on both sides."""
    hit = np.zeros(len(result.outputs[0].main_out), dtype=bool)
    for o in result.outputs:
        hit |= o.trace.flags[stage]
    zone = hit.copy()
    for b in np.flatnonzero(hit):
        zone[max(0, b - pad):b + pad + 1] = True
    return zone


def cmd_compare(cfg, outdir, chash, seed):
    results = {v: simulate_dwell(cfg, v) for v in COMPARE_VARIANTS}
    write_csv(os.path.join(outdir, "compare_metrics.csv"), METRIC_HEADER,
              [_metric_row(v, r.metrics) for v, r in results.items()], chash, seed)
    n = cfg.scenario.range_bins
    det = {}
    for v, r in results.items():
        d = np.zeros(n, dtype=bool)
        d[r.report.bins] = True
        det[v] = d
    zone = saturating_zone(results["diagc_off"], cfg.receiver.protected_stage,
                           cfg.waveform.n_samples)
    differs = det["diagc_on"] != det["diagc_off"]
    rows = [[b, det["diagc_on"][b], det["diagc_off"][b], det["stc_only"][b], differs[b], zone[b]]
            for b in range(n)]
    write_csv(os.path.join(outdir, "compare_bins.csv"),
              ["bin", "diagc_on", "diagc_off", "stc_only", "differs", "saturating_zone"],
              rows, chash, seed)
    if np.any(differs & ~zone):
        _warn("detections differ outside the saturating zone at bins "
              f"{np.flatnonzero(differs & ~zone).tolist()}")
    return results


def cmd_sweep(cfg, outdir, chash, seed, steps, ramp):
    rows = sweep_step_distortion(generate(cfg.waveform), steps, ramp)
    write_csv(os.path.join(outdir, "sweep.csv"),
              ["step_db", "pulse_width_bins", "peak_sidelobe_db"],
              [[r.step_db, r.pulse_width_bins, r.peak_sidelobe_db] for r in rows], chash, seed)
    return rows


def _parse_steps(text):
    try:
        steps = [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise ConfigurationError(f"cannot parse {text!r}", key="--steps") from None
    if not steps or any(s < 0 for s in steps):
        raise ConfigurationError("steps must be non-negative dB values", key="--steps")
    return steps


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg, chash = load_config(args.config, seed=args.seed)
        for w in cfg.validate():
            _warn(f"{w.key}: {w.message}")
        if args.command == "sweep-step":
            steps = _parse_steps(args.steps)
            ramp = cfg.diagc.slew_db_per_bin if args.ramp is None else args.ramp
            if ramp <= 0:
                raise ConfigurationError("ramp must be positive", key="--ramp")
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    seed = cfg.scenario.rng_seed
    parent = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(parent, exist_ok=True)
    tmp = tempfile.mkdtemp(prefix=".diagcsim-", dir=parent)
    try:
        if args.command == "run":
            cmd_run(cfg, tmp, chash, seed)
        elif args.command == "compare":
            cmd_compare(cfg, tmp, chash, seed)
        else:
            cmd_sweep(cfg, tmp, chash, seed, steps, ramp)
        shutil.copytree(tmp, args.out, dirs_exist_ok=True)
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001 - reported as a runtime failure
        print(f"runtime error: {e}", file=sys.stderr)
        return 2
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
