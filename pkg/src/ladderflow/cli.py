"""Command-line interface: basis, hamiltonian, sweep, flow, scan, fluct.

Every output table embeds the fully resolved configuration (and the seed)
so a run can be reproduced from its own file.  Exit codes: 0 success,
2 configuration error, 3 I/O error, 4 solver non-convergence, 5 flow with
persistent pathological steps (> 25% of records).
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .analysis import (NoCrossingError, crossing_scan, fluctuation_p,
                       spectrum_sweep)
from .basis import enumerate_basis
from .eigensolver import LanczosConvergenceError
from .hamiltonian import CouplingSet, build_hamiltonian
from .reduction import FlowError, run_flow

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_SOLVER = 4
EXIT_PATHOLOGICAL = 5

_PATHOLOGY_LIMIT = 0.25


@dataclass
class RunConfig:
    """Fully resolved options of one CLI invocation."""

    command: str
    scheme: str = "su2"
    L: int = 6
    M_tot: int = 0
    J_t: Optional[float] = None
    J_l: Optional[float] = None
    J_c: Optional[float] = None
    jt_grid: Optional[list] = None
    N_min: int = 10
    k_track: int = 4
    tol: float = 1e-10
    seed: int = 0
    max_iter: int = 20000
    pair: tuple = (1, 2)
    bracket: tuple = (4.0, 6.0)
    scan_tol: float = 1e-8
    fluct_k: int = 10
    dump: bool = False
    out: Optional[str] = None
    fmt: str = "csv"
    plot_script: Optional[str] = None

    def meta(self) -> dict:
        # the output location is not part of the run: identical configs
        # must produce byte-identical bodies wherever they are written
        skip = {"out", "plot_script"}
        d = {k: v for k, v in self.__dict__.items()
             if v is not None and k not in skip}
        d["version"] = __version__
        return d


_GRID_HELP = "comma list (4,5,6) or lo:hi:count (4:6:21)"


def _parse_grid(text: str) -> list:
    if ":" in text:
        lo, hi, count = text.split(":")
        return [float(x) for x in np.linspace(float(lo), float(hi),
                                              int(count))]
    return [float(x) for x in text.split(",")]


def _parse_pair(text: str) -> tuple:
    a, b = text.split(",")
    return int(a), int(b)


def _parse_bracket(text: str) -> tuple:
    a, b = text.split(",")
    return float(a), float(b)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ladderflow",
        description="Spin-ladder spectra and Hilbert-space reduction flows")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, couplings=False, solver=False, output=False):
        sp.add_argument("--config", help="JSON file with option defaults")
        sp.add_argument("--scheme", choices=("su2", "so4"))
        sp.add_argument("--L", type=int, dest="L")
        sp.add_argument("--mtot", type=int, dest="M_tot")
        if couplings:
            sp.add_argument("--jt", type=float, dest="J_t")
            sp.add_argument("--jl", type=float, dest="J_l")
            sp.add_argument("--jc", type=float, dest="J_c")
        if solver:
            sp.add_argument("--tol", type=float)
            sp.add_argument("--seed", type=int)
            sp.add_argument("--max-iter", type=int, dest="max_iter")
        if output:
            sp.add_argument("--out")
            sp.add_argument("--format", choices=("csv", "json"), dest="fmt")
            sp.add_argument("--plot-script", dest="plot_script")

    sp = sub.add_parser("basis", help="sector dimension and state list")
    common(sp)
    sp.add_argument("--dump", action="store_true")
    sp.add_argument("--out")

    sp = sub.add_parser("hamiltonian", help="assemble and dump the operator")
    common(sp, couplings=True)
    sp.add_argument("--dump", action="store_true")
    sp.add_argument("--out")

    sp = sub.add_parser("sweep", help="lowest levels on a J_t grid")
    common(sp, couplings=True, solver=True, output=True)
    sp.add_argument("--jt-grid", dest="jt_grid", help=_GRID_HELP)
    sp.add_argument("--k", type=int, dest="k_track")

    sp = sub.add_parser("flow", help="basis-elimination flow")
    common(sp, couplings=True, solver=True, output=True)
    sp.add_argument("--nmin", type=int, dest="N_min")
    sp.add_argument("--ktrack", type=int, dest="k_track")

    sp = sub.add_parser("scan", help="locate a level crossing")
    common(sp, couplings=True, solver=True, output=True)
    sp.add_argument("--pair", type=_parse_pair)
    sp.add_argument("--bracket", type=_parse_bracket)
    sp.add_argument("--scan-tol", type=float, dest="scan_tol")

    sp = sub.add_parser("fluct", help="excited-state fluctuation profile")
    common(sp, couplings=True, solver=True, output=True)
    sp.add_argument("--nmin", type=int, dest="N_min")
    sp.add_argument("--ktrack", type=int, dest="k_track")
    sp.add_argument("--fluct-k", type=int, dest="fluct_k")
    return p


def parse_config(argv, parser: Optional[argparse.ArgumentParser] = None
                 ) -> RunConfig:
    """Resolve flags over config-file values over defaults."""
    parser = parser or _build_parser()
    ns = parser.parse_args(argv)
    file_values = {}
    if getattr(ns, "config", None):
        try:
            with open(ns.config, encoding="utf-8") as fh:
                file_values = json.load(fh)
        except OSError as exc:
            parser.error(f"cannot read config file: {exc}")
        except json.JSONDecodeError as exc:
            parser.error(f"malformed config file: {exc}")
    cfg = RunConfig(command=ns.command)
    for key in vars(cfg):
        if key == "command":
            continue
        flag = getattr(ns, key, None)
        if flag is not None:
            setattr(cfg, key, flag)
        elif key in file_values:
            value = file_values[key]
            if key in ("pair", "bracket"):
                value = tuple(value)
            setattr(cfg, key, value)
    if isinstance(cfg.jt_grid, str):
        cfg.jt_grid = _parse_grid(cfg.jt_grid)
    _validate(cfg, parser)
    return cfg


def _validate(cfg: RunConfig, parser) -> None:
    if cfg.L < 1:
        parser.error(f"--L must be >= 1, got {cfg.L}")
    if abs(cfg.M_tot) > cfg.L:
        parser.error(f"--mtot must satisfy |M_tot| <= L, got {cfg.M_tot}")
    for name in ("J_t", "J_l", "J_c"):
        v = getattr(cfg, name)
        if v is not None and not np.isfinite(v):
            parser.error(f"{name} must be finite")
    flags = {"J_t": "--jt", "J_l": "--jl", "J_c": "--jc"}
    if cfg.command in ("hamiltonian", "flow", "fluct"):
        needed = ("J_t", "J_l", "J_c")
    elif cfg.command in ("sweep", "scan"):
        needed = ("J_l", "J_c")
    else:
        needed = ()
    for name in needed:
        if getattr(cfg, name) is None:
            parser.error(f"{cfg.command} requires {flags[name]}")
    if cfg.command == "sweep" and not cfg.jt_grid:
        parser.error("sweep requires --jt-grid")
    if cfg.command in ("flow", "fluct") and cfg.N_min < cfg.k_track + 2:
        parser.error(f"--nmin must be >= ktrack + 2 = {cfg.k_track + 2}")
    if not cfg.tol > 0:
        parser.error("--tol must be positive")


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def emit_table(rows: list, fmt: str, path: Optional[str],
               meta: Optional[dict] = None) -> None:
    """Write homogeneous rows (list of dicts) as CSV or JSON.

    CSV carries the metadata as leading `#` comment lines and floats at 17
    significant digits; JSON wraps the rows with a `meta` field.
    """
    meta = meta or {}
    if fmt == "json":
        payload = {"meta": meta, "rows": rows}
        text = json.dumps(payload, indent=1, default=_format_value) + "\n"
    else:
        buf = io.StringIO()
        for key in sorted(meta):
            buf.write(f"# {key}: {meta[key]}\n")
        if rows:
            cols = list(rows[0].keys())
            buf.write(",".join(cols) + "\n")
            for row in rows:
                buf.write(",".join(_format_value(row[c]) for c in cols) + "\n")
        text = buf.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def parse_table(path: str):
    """Round-trip reader for emit_table CSV output: (meta, rows)."""
    meta, rows, cols = {}, [], None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                meta[key.strip()] = value.strip()
            elif cols is None:
                cols = line.split(",")
            elif line:
                vals = []
                for tok in line.split(","):
                    try:
                        vals.append(int(tok))
                    except ValueError:
                        vals.append(float(tok))
                rows.append(dict(zip(cols, vals)))
    return meta, rows


def emit_plotscript(table_path: str,
                    out_path: Optional[str] = None) -> str:
    """Standalone matplotlib script rendering the given CSV table.

    Flow tables (with an N column) are drawn against decreasing N; sweep
    tables against J_t.  An entropy column gets its own panel.
    """
    with open(table_path, encoding="utf-8") as fh:
        cols = None
        for line in fh:
            if not line.startswith("#"):
                cols = line.strip().split(",")
                break
    if not cols:
        raise ValueError(f"{table_path} has no header row")
    xcol = "N" if "N" in cols else ("jt" if "jt" in cols else cols[0])
    ycols = [c for c in cols if c.startswith(("e", "p")) and c != "entropy"
             and c[1:].isdigit()]
    has_entropy = "entropy" in cols
    panels = 2 if has_entropy else 1
    lines = [
        "#!/usr/bin/env python3",
        f'"""Plot {table_path} (auto-generated)."""',
        "import io",
        "import numpy as np",
        "import matplotlib.pyplot as plt",
        "",
        f"raw = [line for line in open({table_path!r}, encoding='utf-8')",
        "       if not line.startswith('#')]",
        "data = np.genfromtxt(io.StringIO(''.join(raw)), delimiter=',',",
        "                     names=True)",
        f"fig, axes = plt.subplots({panels}, 1, sharex=True, squeeze=False)",
        f"x = data[{xcol!r}]",
    ]
    for c in ycols:
        lines.append(f"axes[0, 0].plot(x, data[{c!r}], label={c!r})")
    lines += [
        f"axes[0, 0].set_ylabel('energy per site')",
        "axes[0, 0].legend()",
    ]
    if has_entropy:
        lines += [
            "axes[1, 0].plot(x, data['entropy'], color='k')",
            "axes[1, 0].set_ylabel('entropy per site')",
        ]
    lines.append(f"axes[-1, 0].set_xlabel({xcol!r})")
    if xcol == "N":
        lines.append("axes[-1, 0].invert_xaxis()")
    lines += [
        f"plt.savefig({(table_path + '.png')!r}, dpi=150)",
        "print('wrote', " + repr(table_path + ".png") + ")",
        "",
    ]
    text = "\n".join(lines)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _cmd_basis(cfg: RunConfig) -> int:
    basis = enumerate_basis(cfg.scheme, cfg.L, cfg.M_tot)
    print(f"scheme={cfg.scheme} L={cfg.L} M_tot={cfg.M_tot} "
          f"dimension={basis.dim}")
    if cfg.dump:
        stream = open(cfg.out, "w", encoding="utf-8") if cfg.out else sys.stdout
        try:
            for i in range(basis.dim):
                stream.write(f"{i} {basis.label(i)}\n")
        finally:
            if cfg.out:
                stream.close()
    return EXIT_OK


def _cmd_hamiltonian(cfg: RunConfig) -> int:
    basis = enumerate_basis(cfg.scheme, cfg.L, cfg.M_tot)
    op = build_hamiltonian(basis, CouplingSet(cfg.J_t, cfg.J_l, cfg.J_c))
    print(f"scheme={cfg.scheme} dim={op.dim} nnz={op.nnz}")
    if cfg.dump:
        stream = open(cfg.out, "w", encoding="utf-8") if cfg.out else sys.stdout
        try:
            op.dump(stream)
        finally:
            if cfg.out:
                stream.close()
    return EXIT_OK


def _cmd_sweep(cfg: RunConfig) -> int:
    points = spectrum_sweep(cfg.scheme, cfg.L, cfg.J_l, cfg.J_c, cfg.jt_grid,
                            k=cfg.k_track, with_entropy=True,
                            M_tot=cfg.M_tot, tol=cfg.tol, seed=cfg.seed)
    rows = []
    for pt in points:
        row = {"jt": pt.J_t}
        row.update({f"e{i+1}": e for i, e in enumerate(pt.energies)})
        row["entropy"] = pt.entropy
        rows.append(row)
    emit_table(rows, cfg.fmt, cfg.out, cfg.meta())
    if cfg.plot_script and cfg.out:
        emit_plotscript(cfg.out, cfg.plot_script)
    return EXIT_OK


def _flow_rows(traj) -> list:
    rows = []
    for r in traj.records:
        row = {"N": r.N, "g": r.g}
        row.update({f"e{i+1}": e for i, e in enumerate(r.energies)})
        row["entropy"] = r.entropy
        row["eliminated_index"] = r.eliminated
        row["eliminated_amplitude"] = r.eliminated_amplitude
        row["pathology"] = r.pathology
        rows.append(row)
    return rows


def _cmd_flow(cfg: RunConfig) -> int:
    traj = run_flow(cfg.scheme, cfg.L,
                    CouplingSet(cfg.J_t, cfg.J_l, cfg.J_c), cfg.N_min,
                    cfg.k_track, cfg.M_tot, tol=cfg.tol,
                    max_iter=cfg.max_iter, seed=cfg.seed)
    emit_table(_flow_rows(traj), cfg.fmt, cfg.out, cfg.meta())
    if cfg.plot_script and cfg.out:
        emit_plotscript(cfg.out, cfg.plot_script)
    if traj.pathology_fraction() > _PATHOLOGY_LIMIT:
        print(f"warning: {traj.pathology_fraction():.0%} of steps were "
              "pathological (coupling frozen)", file=sys.stderr)
        return EXIT_PATHOLOGICAL
    return EXIT_OK


def _cmd_scan(cfg: RunConfig) -> int:
    report = crossing_scan(cfg.scheme, cfg.L, cfg.J_l, cfg.J_c,
                           pair=cfg.pair, bracket=cfg.bracket,
                           tol=cfg.scan_tol, M_tot=cfg.M_tot,
                           solver_tol=cfg.tol, seed=cfg.seed)
    verdict = {"pair": list(report.pair), "jt_star": report.J_t_star,
               "kind": report.kind, "gap": report.gap_at_star}
    print(json.dumps(verdict))
    if cfg.out:
        row = {"pair_lo": report.pair[0], "pair_hi": report.pair[1],
               "jt_star": report.J_t_star, "kind": report.kind,
               "gap": report.gap_at_star,
               "bracket_lo": report.bracket[0],
               "bracket_hi": report.bracket[1]}
        emit_table([row], cfg.fmt, cfg.out, cfg.meta())
    return EXIT_OK


def _cmd_fluct(cfg: RunConfig) -> int:
    traj = run_flow(cfg.scheme, cfg.L,
                    CouplingSet(cfg.J_t, cfg.J_l, cfg.J_c), cfg.N_min,
                    cfg.k_track, cfg.M_tot, tol=cfg.tol,
                    max_iter=cfg.max_iter, seed=cfg.seed)
    dims = traj.dims()
    rows = []
    for N in dims:
        if N - cfg.fluct_k < dims.min():
            break
        row = {"N": int(N)}
        for i in range(1, cfg.k_track + 1):
            row[f"p{i}"] = fluctuation_p(traj, i, int(N), cfg.fluct_k)
        rows.append(row)
    emit_table(rows, cfg.fmt, cfg.out, cfg.meta())
    if cfg.plot_script and cfg.out:
        emit_plotscript(cfg.out, cfg.plot_script)
    return EXIT_OK


_COMMANDS = {
    "basis": _cmd_basis,
    "hamiltonian": _cmd_hamiltonian,
    "sweep": _cmd_sweep,
    "flow": _cmd_flow,
    "scan": _cmd_scan,
    "fluct": _cmd_fluct,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        cfg = parse_config(argv, parser)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return _COMMANDS[cfg.command](cfg)
    except (FlowError, LanczosConvergenceError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except NoCrossingError as exc:
        print(f"scan error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
