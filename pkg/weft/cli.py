import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .config import ConfigManager
from .errors import PreconditionError, VerificationFailed, WeftError
from .grid import Grid, hbar_fourier_at, make_grid, make_reference_state
from .oracles import run_verification_suite
from .phase_space import cross_ambiguity, cross_wigner
from .reconstruction import (Which, default_gamma, reconstruct_from_rho, reconstruct_phi, reconstruct_psi,
                             reconstruction_error)
from .report import ReportManager
from .serialization import FieldFormat, dump_field, load_field, load_state, save_state
from .weak_values import (WEAK_VALUE_SCHEMA, ObservableKind, ObservableSymbol, checked_overlap, lundeen_reconstruct,
                          pointer_readout, projector_scan_closed_form, projector_weak_value_scan,
                          quasi_distribution_rho, weak_value_direct, weak_value_from_rho)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"

logger = logging.getLogger(__name__)


def _complex_json(value: complex) -> Dict[str, float]:
    value = complex(value)
    return {"re": value.real, "im": value.imag}


class WeftCLI:

    def __init__(self, config_path: Optional[Path] = None):
        self.config_manager = ConfigManager(config_path)
        self.report_manager = ReportManager(Path(self.config_manager.get("report_dir")))

    @property
    def workers(self) -> Optional[int]:
        return self.config_manager.get("worker_threads")

    @property
    def overlap_tolerance(self) -> float:
        return float(self.config_manager.get("overlap_tolerance", 1e-10))

    def _grid_from_args(self, args) -> Grid:
        n = args.n if args.n is not None else self.config_manager.get("grid.n", 256)
        dx = args.dx if args.dx is not None else self.config_manager.get("grid.dx", 0.1)
        hbar = args.hbar if args.hbar is not None else self.config_manager.get("grid.hbar", 1.0)
        return make_grid(n, dx, hbar)

    def _emit(self, payload: Dict[str, Any]):
        print(json.dumps(payload, indent=2))

    def _write_field(self, field, args):
        fmt = FieldFormat(args.format) if args.format else None
        dump_field(field, args.out, fmt, precision=int(self.config_manager.get("csv_precision", 17)))
        print(f"{field.kind} field written to {args.out}")

    def wigner_command(self, args):
        phi, psi = load_state(args.phi), load_state(args.psi)
        logger.info(f"Computing cross-Wigner transform on n={phi.grid.n}")
        self._write_field(cross_wigner(phi, psi, self.workers), args)

    def ambiguity_command(self, args):
        phi, psi = load_state(args.phi), load_state(args.psi)
        logger.info(f"Computing cross-ambiguity function on n={phi.grid.n}")
        self._write_field(cross_ambiguity(phi, psi), args)

    def rho_command(self, args):
        phi, psi = load_state(args.phi), load_state(args.psi)
        self._write_field(quasi_distribution_rho(phi, psi, self.overlap_tolerance, self.workers), args)

    def weak_value_command(self, args):
        phi, psi = load_state(args.phi), load_state(args.psi)
        symbol = ObservableSymbol.parse(args.observable)
        overlap = checked_overlap(phi, psi, self.overlap_tolerance)
        rho = quasi_distribution_rho(phi, psi, self.overlap_tolerance, self.workers)
        value = weak_value_from_rho(symbol, rho)
        readout = pointer_readout(value, args.g, args.v, psi.grid.hbar)
        payload = {"observable": symbol.describe(), "overlap": _complex_json(overlap)}
        payload.update(readout.to_json())
        if symbol.kind is not ObservableKind.GRIDDED:
            payload["direct"] = _complex_json(weak_value_direct(symbol, phi, psi, self.overlap_tolerance))
        self._emit(payload)

    def schema_command(self, args):
        self._emit(WEAK_VALUE_SCHEMA)

    def reconstruct_command(self, args):
        field = load_field(args.field)
        known = load_state(args.known)
        gamma = load_state(args.gamma) if args.gamma else default_gamma(known.grid)
        if field.kind == "rho":
            if args.overlap is None:
                raise PreconditionError("A rho field needs --overlap <phi|psi> to fix its scale")
            try:
                overlap = complex(args.overlap.replace(" ", ""))
            except ValueError as e:
                raise PreconditionError(f"Bad --overlap value {args.overlap!r}: {e}") from e
            recovered = reconstruct_from_rho(field, known, gamma, overlap, args.which, self.overlap_tolerance,
                                             self.workers)
        elif Which(args.which) is Which.PHI:
            recovered = reconstruct_phi(field, known, gamma, self.overlap_tolerance, self.workers)
        else:
            recovered = reconstruct_psi(field, known, gamma, self.overlap_tolerance, self.workers)
        save_state(recovered, args.out)
        payload: Dict[str, Any] = {"which": args.which, "out": str(args.out), "error": None}
        if args.truth:
            payload["error"] = reconstruction_error(recovered, load_state(args.truth)).to_json()
        self._emit(payload)

    def lundeen_demo_command(self, args):
        psi = load_state(args.psi) if args.psi else None
        if psi is not None:
            grid = psi.grid
        else:
            grid = make_grid(self.config_manager.get("grid.n", 256), self.config_manager.get("grid.dx", 0.1),
                             self.config_manager.get("grid.hbar", 1.0))
        default_index = grid.n // 2 if psi is not None else grid.n // 2 + 2
        p0_index = args.p0_index if args.p0_index is not None else default_index
        if not 0 <= p0_index < grid.n:
            raise PreconditionError(f"--p0-index {p0_index} outside [0, {grid.n})")
        p0 = float(grid.p[p0_index])
        if psi is None:
            psi = make_reference_state("gaussian", grid, x0=1.0, p0=p0)
            logger.info(f"No --psi given; using the bundled displaced Gaussian ({psi.label})")
        scan = projector_weak_value_scan(psi, p0, self.overlap_tolerance, self.workers)
        k = complex(hbar_fourier_at(psi, p0)[0])
        rebuilt = lundeen_reconstruct(scan, p0, k, grid)
        closed_form = projector_scan_closed_form(psi, p0, self.overlap_tolerance)
        self._emit({
            "p0_index": p0_index,
            "p0": p0,
            "k": _complex_json(k),
            "max_abs_round_trip": reconstruction_error(rebuilt, psi).max_abs,
            "closed_form_residual": float(abs(scan - closed_form).max()),
        })

    def verify_command(self, args):
        grid = self._grid_from_args(args)
        seed = args.seed if args.seed is not None else int(self.config_manager.get("seed", 42))
        report = run_verification_suite(grid, seed=seed, tolerances=self.config_manager.get("tolerances"),
                                        workers=self.workers, overlap_tolerance=self.overlap_tolerance)
        self.report_manager.add_verification_report(report)
        path = self.report_manager.save_report_json(report, Path(args.out) if args.out else None)
        if args.summary:
            self.report_manager.save_summary_report_to_file(report)
        if args.pdf:
            if not self.report_manager.generate_pdf_report(report):
                logger.warning("PDF report could not be generated")
        failures = [check.name for check in report.failures()]
        self._emit({"all_passed": report.all_passed, "report": str(path) if path else None,
                    "checks": len(report.checks), "failures": failures})
        if failures:
            raise VerificationFailed(f"{len(failures)} check(s) failed: {', '.join(failures)}")

    def make_state_command(self, args):
        grid = self._grid_from_args(args)
        if args.p0_index is not None and not 0 <= args.p0_index < grid.n:
            raise PreconditionError(f"--p0-index {args.p0_index} outside [0, {grid.n})")
        p0 = float(grid.p[args.p0_index]) if args.p0_index is not None else args.p0
        state = make_reference_state(args.kind, grid, x0=args.x0, p0=p0, width=args.width, k=args.k)
        save_state(state, args.out)
        print(f"{state.label} written to {args.out}")

    def config_get_command(self, args):
        value = self.config_manager.get(args.key)
        if value is None:
            print(f"Configuration key '{args.key}' not found.")
        elif isinstance(value, (dict, list)):
            print(f"{args.key}:")
            print(json.dumps(value, indent=4))
        else:
            print(f"{args.key}: {value}")

    def config_set_command(self, args):
        try:
            parsed_value = json.loads(args.value)
        except json.JSONDecodeError:
            parsed_value = args.value
        self.config_manager.set(args.key, parsed_value)
        print(f"Configuration key '{args.key}' set.")
        logger.info(f"Config set: {args.key}={parsed_value}")

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="wigner-weft",
            description="Cross-Wigner transforms, weak values and state reconstruction on a 1-D grid",
            formatter_class=argparse.RawTextHelpFormatter,
        )
        verbosity = parser.add_mutually_exclusive_group()
        verbosity.add_argument("-v", "--verbose", action="store_true", help="Log debug messages to stderr.")
        verbosity.add_argument("-q", "--quiet", action="store_true", help="Only log warnings and errors.")
        subparsers = parser.add_subparsers(dest="command", help="Available commands", required=True)

        def pair_parser(name: str, help_text: str, func) -> argparse.ArgumentParser:
            sub = subparsers.add_parser(name, help=help_text)
            sub.add_argument("--phi", required=True, help="State file of the postselected state.")
            sub.add_argument("--psi", required=True, help="State file of the preselected state.")
            sub.set_defaults(func=func)
            return sub

        def field_output(sub: argparse.ArgumentParser):
            sub.add_argument("--out", required=True, help="Output path; .csv writes x,p,re,im rows, anything else a JSON field file.")
            sub.add_argument("--format", choices=[f.value for f in FieldFormat], help="Override the format implied by --out.")

        def grid_options(sub: argparse.ArgumentParser):
            sub.add_argument("--n", type=int, help="Grid points (power of two). Defaults to grid.n in config.")
            sub.add_argument("--dx", type=float, help="Grid spacing. Defaults to grid.dx in config.")
            sub.add_argument("--hbar", type=float, help="Action scale. Defaults to grid.hbar in config.")

        field_output(pair_parser("wigner", "Cross-Wigner transform W(phi,psi).", self.wigner_command))
        field_output(pair_parser("ambiguity", "Cross-ambiguity function A(phi,psi).", self.ambiguity_command))
        field_output(pair_parser("rho", "Weak-value quasi-distribution W(phi,psi)/<phi|psi>.", self.rho_command))

        weak_parser = pair_parser("weak-value", "Weak value of x, p or a position projector, with pointer readouts.",
                                  self.weak_value_command)
        weak_parser.add_argument("--observable", required=True, help="x, p or proj:<x_index>.")
        weak_parser.add_argument("--g", type=float, default=1.0, help="Coupling strength g.")
        weak_parser.add_argument("--v", type=float, default=1.0, help="Pointer readout parameter v.")

        schema_parser = subparsers.add_parser("schema", help="Print the JSON Schema of a command's stdout payload.")
        schema_parser.add_argument("name", choices=["weak-value"], help="Command whose output schema to print.")
        schema_parser.set_defaults(func=self.schema_command)

        reconstruct_parser = subparsers.add_parser("reconstruct", help="Rebuild phi or psi from a W (or rho) field and the other state.")
        reconstruct_parser.add_argument("--which", required=True, choices=[w.value for w in Which], help="State to rebuild.")
        reconstruct_parser.add_argument("--field", required=True, help="JSON field file of W(phi,psi) or rho.")
        reconstruct_parser.add_argument("--known", required=True, help="State file of the other state.")
        reconstruct_parser.add_argument("--gamma", help="Auxiliary state file. Defaults to a centred Gaussian.")
        reconstruct_parser.add_argument("--overlap", help="<phi|psi> as a Python complex literal; required for rho fields.")
        reconstruct_parser.add_argument("--truth", help="Reference state file; prints the reconstruction error.")
        reconstruct_parser.add_argument("--out", required=True, help="Output state file.")
        reconstruct_parser.set_defaults(func=self.reconstruct_command)

        lundeen_parser = subparsers.add_parser("lundeen-demo", help="Projector scan and wavefunction rebuild at momentum p0.")
        lundeen_parser.add_argument("--psi", help="State file. Defaults to a bundled displaced Gaussian.")
        lundeen_parser.add_argument("--p0-index", type=int, help="Index of p0 on the momentum lattice.")
        lundeen_parser.set_defaults(func=self.lundeen_demo_command)

        verify_parser = subparsers.add_parser("verify", help="Run the identity verification suite.")
        grid_options(verify_parser)
        verify_parser.add_argument("--seed", type=int, help="Seed of the random-state generator.")
        verify_parser.add_argument("--out", help="Report path. Defaults to a timestamped file in report_dir.")
        verify_parser.add_argument("--summary", action="store_true", help="Also save a text summary in report_dir.")
        verify_parser.add_argument("--pdf", action="store_true", help="Also save a PDF summary in report_dir.")
        verify_parser.set_defaults(func=self.verify_command)

        make_parser = subparsers.add_parser("make-state", help="Write a reference state file.")
        grid_options(make_parser)
        make_parser.add_argument("--kind", required=True, choices=["gaussian", "hermite", "plane_wave"])
        make_parser.add_argument("--x0", type=float, default=0.0, help="Centre (gaussian, hermite).")
        make_parser.add_argument("--p0", type=float, default=0.0, help="Momentum; must be on the lattice for plane_wave.")
        make_parser.add_argument("--p0-index", type=int, help="Momentum given as a lattice index; overrides --p0.")
        make_parser.add_argument("--width", type=float, help="Width. Defaults to sqrt(hbar).")
        make_parser.add_argument("--k", type=int, default=0, help="Hermite order.")
        make_parser.add_argument("--out", required=True, help="Output state file.")
        make_parser.set_defaults(func=self.make_state_command)

        config_parser = subparsers.add_parser("config", help="Manage configuration.")
        config_subparsers = config_parser.add_subparsers(dest="config_command", help="Action", required=True)
        config_get_parser = config_subparsers.add_parser("get", help="Get a configuration value.")
        config_get_parser.add_argument("key", type=str, help="Config key (dot notation, e.g. tolerances.quadrature).")
        config_get_parser.set_defaults(func=self.config_get_command)
        config_set_parser = config_subparsers.add_parser("set", help="Set a configuration value.")
        config_set_parser.add_argument("key", type=str, help="Config key (dot notation).")
        config_set_parser.add_argument("value", type=str, help="Value, parsed as JSON when possible.")
        config_set_parser.set_defaults(func=self.config_set_command)
        return parser

    def run_command(self, argv: Optional[List[str]] = None) -> int:
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return 0 if e.code in (0, None) else 1
        level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
        logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
        try:
            args.func(args)
        except WeftError as e:
            logger.error(f"{args.command} failed: {e}")
            return e.exit_code
        except OSError as e:
            logger.error(f"{args.command} failed: {e}")
            return 1
        return 0


def main_entry():
    sys.exit(WeftCLI().run_command())


if __name__ == "__main__":
    main_entry()
