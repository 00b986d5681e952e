import json
import sys
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

import typer
from loguru import logger
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from virtual_wrt.algebra.poly import JonesPoly, LaurentPoly, RootParams
from virtual_wrt.config.settings import settings
from virtual_wrt.diagram.codec import VirtualLinkDiagram, parse_diagram, serialize
from virtual_wrt.diagram.library import DiagramLibrary
from virtual_wrt.errors import DiagramSyntaxError, DiagramValidationError, VirtualWrtError

app = typer.Typer(help="Quantum invariants of virtual link diagrams.", no_args_is_help=True)
console = Console(highlight=False, soft_wrap=True)
err_console = Console(stderr=True, highlight=False)
library = DiagramLibrary()


class OutputFormat(str, Enum):
    text = "text"
    json = "json"


CODE = typer.Option(None, "--code", "-c", help="Extended Gauss code, e.g. 'O1+U1+' (';' separates components)")
FILE = typer.Option(None, "--file", "-f", help="File holding a Gauss code or the JSON form")
BUILTIN = typer.Option(None, "--builtin", "-b", help="Name of a builtin diagram (see builtin-list)")
FORMAT = typer.Option(OutputFormat.text, "--format", help="Output format")


def _stderr_sink(message) -> None:
    # resolved per message so captured streams in tests are honoured
    sys.stderr.write(message)


@app.callback()
def main(verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging to stderr")):
    logger.remove()
    logger.add(_stderr_sink, level="DEBUG" if verbose else settings.log_level, colorize=False)


def format_complex(z: complex, digits: int = 6) -> str:
    """a+bi with ``digits`` significant digits; parts below 1e-9 print as 0."""
    z = complex(z)
    re_part = 0.0 if abs(z.real) < 1e-9 else z.real
    im_part = 0.0 if abs(z.imag) < 1e-9 else z.imag
    if im_part == 0:
        return f"{re_part:.{digits}g}"
    im_text = f"{abs(im_part):.{digits}g}i"
    if re_part == 0:
        return ("-" if im_part < 0 else "") + im_text
    return f"{re_part:.{digits}g}{'-' if im_part < 0 else '+'}{im_text}"


def _complex_json(z: complex) -> Dict[str, float]:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def load_input(code: Optional[str], file: Optional[Path], builtin_name: Optional[str]) -> VirtualLinkDiagram:
    given = [s for s in (code, file, builtin_name) if s is not None]
    if len(given) != 1:
        raise typer.BadParameter("give exactly one of --code, --file, --builtin")
    if builtin_name is not None:
        try:
            return library.load(builtin_name)
        except KeyError as e:
            raise typer.BadParameter(str(e.args[0])) from e
    if file is not None:
        if not file.exists():
            raise typer.BadParameter(f"file not found: {file}")
        return parse_diagram(file.read_text(encoding="utf-8"), name=file.stem)
    return parse_diagram(code)


def emit(fmt: OutputFormat, payload: Dict, lines: List[str]) -> None:
    if fmt == OutputFormat.json:
        typer.echo(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            console.print(line, markup=False)


@contextmanager
def reported():
    """Malformed diagrams exit with 2, computation errors with 1."""
    try:
        yield
    except (DiagramSyntaxError, DiagramValidationError) as e:
        err_console.print(f"[bold red]Invalid diagram:[/bold red] {escape(str(e))}")
        raise typer.Exit(code=2)
    except VirtualWrtError as e:
        logger.error(f"{type(e).__name__}: {e}")
        err_console.print(f"[bold red]Error:[/bold red] {escape(str(e))}")
        raise typer.Exit(code=1)


def _parse_colors(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as e:
        raise typer.BadParameter(f"colors must be comma-separated integers, got {text!r}") from e


@app.command()
def bracket(
    code: Optional[str] = CODE,
    file: Optional[Path] = FILE,
    builtin: Optional[str] = BUILTIN,
    unreduced: bool = typer.Option(False, "--unreduced", help="Count every loop, including the last, as d"),
    r: Optional[int] = typer.Option(None, "--r", min=2, help="Evaluate at A = exp(i pi / 2r)"),
    fmt: OutputFormat = FORMAT,
):
    """Bracket polynomial of a virtual link diagram."""
    from virtual_wrt.invariants.bracket import bracket_reduced, bracket_unreduced

    with reported():
        diagram = load_input(code, file, builtin)
        compute = bracket_unreduced if unreduced else bracket_reduced
        poly = compute(diagram)
        payload = {"diagram": serialize(diagram), "unreduced": unreduced, "bracket": poly.to_json()}
        lines = [str(poly)]
        if r is not None:
            value = RootParams(r).lift(poly)
            payload["r"] = r
            payload["value"] = _complex_json(value)
            lines.append(f"at r={r}: {format_complex(value)}")
    emit(fmt, payload, lines)


@app.command()
def jones(
    code: Optional[str] = CODE,
    file: Optional[Path] = FILE,
    builtin: Optional[str] = BUILTIN,
    fmt: OutputFormat = FORMAT,
):
    """Writhe-normalized bracket f(A) and the Jones polynomial V(t)."""
    from virtual_wrt.invariants.bracket import f_poly

    with reported():
        diagram = load_input(code, file, builtin)
        f = f_poly(diagram)
        v = JonesPoly.from_bracket_variable(f)
    emit(
        fmt,
        {"diagram": serialize(diagram), "f": f.to_json(), "jones": v.to_json()},
        [f"f(A) = {f}", f"V(t) = {v}"],
    )


@app.command()
def colored(
    colors: str = typer.Option(..., "--colors", help="One color per component, e.g. '2,1'"),
    code: Optional[str] = CODE,
    file: Optional[Path] = FILE,
    builtin: Optional[str] = BUILTIN,
    r: Optional[int] = typer.Option(None, "--r", min=2, help="Evaluate at level r instead of generic A"),
    fmt: OutputFormat = FORMAT,
):
    """Unreduced colored bracket <K^a> through cabling and Jones-Wenzl projectors."""
    from virtual_wrt.invariants.colored import splice_and_evaluate

    coloring = _parse_colors(colors)
    with reported():
        diagram = load_input(code, file, builtin)
        if r is None:
            value = splice_and_evaluate(diagram, coloring)
            try:
                text = str(LaurentPoly.from_field(value))
            except ValueError:
                text = str(value.as_expr())
            payload = {"diagram": serialize(diagram), "colors": coloring, "value": text}
        else:
            value = splice_and_evaluate(diagram, coloring, RootParams(r))
            text = format_complex(value)
            payload = {"diagram": serialize(diagram), "colors": coloring, "r": r, "value": _complex_json(value)}
    emit(fmt, payload, [text])


def _table_variant(diagram: VirtualLinkDiagram) -> str:
    from virtual_wrt.invariants.conventions import BUILTIN_FOR_VARIANT

    for variant, name in BUILTIN_FOR_VARIANT.items():
        if library.load(name) == diagram:
            return variant
    raise typer.BadParameter(f"--table only applies to {', '.join(BUILTIN_FOR_VARIANT.values())}")


@app.command()
def wrt(
    r: int = typer.Option(..., "--r", min=2, help="Level: A = exp(i pi / 2r)"),
    code: Optional[str] = CODE,
    file: Optional[Path] = FILE,
    builtin: Optional[str] = BUILTIN,
    table: bool = typer.Option(
        False, "--table", help="For the two worked examples, sum the tabulated graph values instead of the state sum"
    ),
    fmt: OutputFormat = FORMAT,
):
    """Normalized WRT invariant Z at level r."""
    from virtual_wrt.algebra.recoupling import example_sums
    from virtual_wrt.invariants.conventions import current_conventions
    from virtual_wrt.invariants.wrt import normalized_wrt

    with reported():
        diagram = load_input(code, file, builtin)
        if table:
            variant = _table_variant(diagram)
            ledger = current_conventions()
            ctx = RootParams(r)
            raw = example_sums(variant, r)
            z = raw * ctx.mu ** 2 * ctx.alpha ** (-ledger.example_signature)
            payload = {
                "diagram": serialize(diagram), "r": r, "source": "table",
                "unnormalized": _complex_json(raw), "normalized": _complex_json(z),
            }
            lines = [f"<K^omega> = {format_complex(raw)}", f"Z = {format_complex(z)}"]
        else:
            result = normalized_wrt(diagram, r)
            payload = {"diagram": serialize(diagram), "source": "state-sum", **result.to_dict()}
            lines = [
                f"<K^omega> = {format_complex(result.unnormalized)}",
                f"n = {result.n_sig} (b+ = {result.b_plus}, b- = {result.b_minus})",
                f"Z = {format_complex(result.normalized)}",
            ]
    emit(fmt, payload, lines)


@app.command()
def group(
    code: Optional[str] = CODE,
    file: Optional[Path] = FILE,
    builtin: Optional[str] = BUILTIN,
    three_manifold: bool = typer.Option(False, "--three-manifold", help="Add one longitude relator per component"),
    symmetric: Optional[int] = typer.Option(
        None, "--symmetric", min=1, max=4, help="Also count homomorphisms into S_n"
    ),
    fmt: OutputFormat = FORMAT,
):
    """Wirtinger presentation, or the 3-manifold group, with its abelianization."""
    from virtual_wrt.invariants.groups import abelianization, count_homomorphisms, three_manifold_group, wirtinger

    with reported():
        diagram = load_input(code, file, builtin)
        presentation = three_manifold_group(diagram) if three_manifold else wirtinger(diagram)
        abelian = abelianization(presentation)
        payload = {
            "diagram": serialize(diagram),
            "three_manifold": three_manifold,
            "presentation": presentation.to_dict(),
            "abelianization": str(abelian),
        }
        lines = [str(presentation), f"abelianization: {abelian}"]
        if symmetric is not None:
            count = count_homomorphisms(presentation, symmetric)
            payload["homomorphisms"] = {f"S{symmetric}": count}
            lines.append(f"homomorphisms into S{symmetric}: {count}")
    emit(fmt, payload, lines)


@app.command()
def move(
    code: Optional[str] = CODE,
    file: Optional[Path] = FILE,
    builtin: Optional[str] = BUILTIN,
    kinds: str = typer.Option("R2,R3", "--kinds", help="Comma-separated move kinds to draw from"),
    steps: int = typer.Option(1, "--steps", min=0),
    seed: int = typer.Option(0, "--seed"),
    list_sites: bool = typer.Option(False, "--list-sites", help="List applicable sites instead of walking"),
    max_crossings: Optional[int] = typer.Option(None, "--max-crossings", min=0),
    fmt: OutputFormat = FORMAT,
):
    """Seeded random walk of moves, or the list of applicable sites."""
    from virtual_wrt.moves.moves import KINDS, enumerate_sites, random_walk

    chosen = [k.strip() for k in kinds.split(",") if k.strip()]
    unknown = [k for k in chosen if k not in KINDS]
    if unknown or not chosen:
        raise typer.BadParameter(f"unknown move kind(s) {unknown}; choose from {', '.join(KINDS)}")

    with reported():
        diagram = load_input(code, file, builtin)
        if list_sites:
            sites = {k: [str(s) for s in enumerate_sites(diagram, k)] for k in chosen}
            payload = {"diagram": serialize(diagram), "sites": sites}
            lines = [f"{k}: {len(v)} site(s)" for k, v in sites.items()]
            lines += [f"  {s}" for k, v in sites.items() for s in v]
        else:
            result = random_walk(diagram, chosen, steps, seed, max_crossings)
            payload = {
                "diagram": serialize(diagram), "kinds": chosen, "steps": steps, "seed": seed,
                "result": serialize(result),
            }
            lines = [serialize(result)]
    emit(fmt, payload, lines)


@app.command()
def verify(
    quick: bool = typer.Option(False, "--quick", help="Skip the slow checks"),
    fmt: OutputFormat = FORMAT,
):
    """Run the acceptance checks; exit 1 if any fails."""
    from virtual_wrt.cli.verify import run_checks, state_sum_report

    with reported():
        results = run_checks(quick=quick)
        report = state_sum_report()
    failed = [res for res in results if not res.passed]

    if fmt == OutputFormat.json:
        typer.echo(json.dumps(
            {"checks": [res.to_dict() for res in results], "state_sum": report}, sort_keys=True
        ))
    else:
        table = Table(title="Acceptance checks")
        table.add_column("Check")
        table.add_column("Result")
        table.add_column("Detail")
        for res in results:
            mark = "[green]pass[/green]" if res.passed else "[red]FAIL[/red]"
            table.add_row(res.name, mark, escape(res.detail))
        console.print(table)
        if report:
            disc = Table(title="State sum against printed values")
            for col in ("Example", "r", "Computed Z", "Printed Z", "|modulus| error", "phase error"):
                disc.add_column(col)
            for row in report:
                disc.add_row(
                    row["variant"], str(row["r"]), format_complex(complex(*row["computed"])),
                    format_complex(complex(*row["printed"])), f"{row['modulus_error']:.3g}",
                    f"{row['phase_error']:.3g}",
                )
            console.print(disc)
        console.print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        raise typer.Exit(code=1)


@app.command("builtin-list")
def builtin_list(
    notes: bool = typer.Option(False, "--notes", help="Also show how each code was obtained"),
    fmt: OutputFormat = FORMAT,
):
    """List the builtin diagrams."""
    entries = library.list_entries()
    fields = ("name", "code", "description", "provenance") + (("notes",) if notes else ())
    if fmt == OutputFormat.json:
        typer.echo(json.dumps([e.model_dump(include=set(fields)) for e in entries], sort_keys=True))
        return
    table = Table(title="Builtin diagrams")
    table.add_column("Name", style="cyan")
    table.add_column("Code")
    table.add_column("Description")
    if notes:
        table.add_column("Notes")
    for e in entries:
        row = [e.name, escape(e.code), escape(e.description)]
        if notes:
            row.append(escape(e.notes.strip()))
        table.add_row(*row)
    console.print(table)


if __name__ == "__main__":
    app()
