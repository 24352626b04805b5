"""Command-line entry point.  Every report is flat key=value lines."""
from __future__ import annotations

import functools
import hashlib
import sys
from pathlib import Path

import click

from . import __version__
from .electric import cone_off, penetration_pattern
from .errors import ExhaustedBudget, RelHypError
from .examples import GENERATORS, marked_cycle
from .flare import flare_report, sample_hallways
from .hyperbolicity import delta_four_point, delta_slim
from .pipelines import combination, converse
from .pseudo_anosov import FlatSegment, LinearPA, check_stretch, mapping_torus_line
from .quasiconvex import project, separation_and_coboundedness
from .textio import _token, dump_graph, parse_graph
from .tree_of_spaces import TreeOfSpaces, assemble_coned, assemble_total, cone_locus, dump_tos, parse_tos, \
    validate


def _mapping_torus(matrix="2,1,1,1", r=16, L=4, spacing=None):
    a, b, c, d = (int(x) for x in str(matrix).split(","))
    return mapping_torus_line(((a, b), (c, d)), int(r), int(L), spacing)


GEN = dict(GENERATORS, marked_cycle=marked_cycle, mapping_torus_line=_mapping_torus)


class Ctx:
    def __init__(self, eps, cap, seed, jobs, out):
        self.eps, self.cap, self.seed, self.jobs, self.out = eps, cap, seed, jobs, out
        self.lines: list[str] = []
        self.digests: list[str] = []

    def read(self, path: str) -> str:
        data = Path(path).read_bytes()
        self.digests.append(f"{Path(path).name}:{hashlib.sha256(data).hexdigest()[:16]}")
        return data.decode()

    def header(self):
        inputs = ",".join(self.digests) or "-"
        return f"version={__version__} seed={self.seed} eps={self.eps} inputs={inputs}"

    def flush(self, body: list[str] | str, header: bool = True):
        text = body if isinstance(body, str) else "\n".join(body) + ("\n" if body else "")
        if header:
            text = self.header() + "\n" + text
        if self.out:
            Path(self.out).write_text(text)
        else:
            click.echo(text, nl=False)


@click.group()
@click.option("--eps", type=int, default=2, show_default=True, help="Neighborhood radius, half-units.")
@click.option("--exhaustive-cap", "cap", type=int, default=150, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True, help="Accepted for compatibility; runs serially.")
@click.option("-o", "out", type=click.Path(dir_okay=False), default=None, help="Write the report here.")
@click.version_option(__version__)
@click.pass_context
def main(ctx, eps, cap, seed, jobs, out):
    """Coarse-geometry workbench for relatively hyperbolic graphs and trees of spaces."""
    ctx.obj = Ctx(eps, cap, seed, jobs, out)


def _out(f):
    """Accept -o after the subcommand as well as before it."""
    @click.option("-o", "out", type=click.Path(dir_okay=False), default=None, help="Write the report here.")
    @functools.wraps(f)
    def wrapper(*args, out=None, **kwargs):
        if out:
            click.get_current_context().find_object(Ctx).out = out
        return f(*args, **kwargs)
    return wrapper


def _fail(exc: Exception):
    click.echo(f"error={type(exc).__name__} message={str(exc)!r}", err=True)
    sys.exit(1)


def _param(v: str):
    return _token(v) if "," not in v else v


@main.command()
@click.argument("name")
@click.argument("params", nargs=-1)
@_out
@click.pass_obj
def gen(c: Ctx, name, params):
    """Generate an instance: gen <name> [k=v ...]. Writes graph or tree-of-spaces text."""
    if name not in GEN:
        raise click.UsageError(f"unknown generator {name!r}; choose from {sorted(GEN)}")
    args, kw = [], {}
    for p in params:
        if "=" in p:
            k, v = p.split("=", 1)
            kw[k] = _param(v)
        else:
            args.append(_param(p))
    try:
        obj = GEN[name](*args, **kw)
    except (RelHypError, TypeError, ValueError) as exc:
        _fail(exc)
    c.flush(dump_tos(obj) if isinstance(obj, TreeOfSpaces) else dump_graph(*obj), header=False)


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["exhaustive", "sampled"]), default=None)
@click.option("--count", type=int, default=100_000)
@click.option("--slim", is_flag=True, help="Use the slim-triangle estimator.")
@_out
@click.pass_obj
def delta(c: Ctx, graph_file, mode, count, slim):
    """Hyperbolicity constant of a graph (quarter-units)."""
    try:
        g, _ = parse_graph(c.read(graph_file))
        mode = mode or ("exhaustive" if len(g) <= c.cap else "sampled")
        fn = delta_slim if slim else delta_four_point
        rep = fn(g, mode=mode, count=count, seed=c.seed, cap=c.cap)
    except RelHypError as exc:
        _fail(exc)
    c.flush([rep.line()])


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@_out
@click.pass_obj
def electrify(c: Ctx, graph_file):
    """Cone off every marked subset; writes the augmented graph."""
    try:
        g, fam = parse_graph(c.read(graph_file))
        cs = cone_off(g, fam)
    except RelHypError as exc:
        _fail(exc)
    c.flush(dump_graph(cs.graph), header=False)


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("path", nargs=-1, required=True)
@_out
@click.pass_obj
def patterns(c: Ctx, graph_file, path):
    """Penetration pattern of a path (vertices of the coned-off graph)."""
    try:
        g, fam = parse_graph(c.read(graph_file))
        cs = cone_off(g, fam)
        pat = penetration_pattern(cs, [_token(v) for v in path], c.eps)
    except RelHypError as exc:
        _fail(exc)
    c.flush([v.line() for v in pat.visits])


@main.command("project")
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("subset")
@click.argument("x")
@_out
@click.pass_obj
def project_cmd(c: Ctx, graph_file, subset, x):
    """Nearest-point projection of x onto a marked subset."""
    try:
        g, fam = parse_graph(c.read(graph_file))
        pts = sorted(project(g, fam[subset], _token(x)), key=g.idx)
    except (RelHypError, KeyError) as exc:
        _fail(exc)
    c.flush([f"x={x} subset={subset} dist={g.set_distance(fam[subset])[g.idx(_token(x))]} "
             f"projection={','.join(map(str, pts))}"])


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@_out
@click.pass_obj
def cobounded(c: Ctx, graph_file):
    """Separation and mutual coboundedness of the marked family."""
    try:
        g, fam = parse_graph(c.read(graph_file))
        rep = separation_and_coboundedness(g, fam)
    except RelHypError as exc:
        _fail(exc)
    c.flush([rep.line()])


@main.group()
def tos():
    """Trees of spaces: validate, assemble, conelocus."""


def _load_tos(c: Ctx, path) -> TreeOfSpaces:
    return parse_tos(c.read(path))


@tos.command("validate")
@click.argument("tos_file", type=click.Path(exists=True, dir_okay=False))
@_out
@click.pass_obj
def tos_validate(c: Ctx, tos_file):
    try:
        rep = validate(_load_tos(c, tos_file), cap=c.cap, seed=c.seed)
    except RelHypError as exc:
        _fail(exc)
    c.flush(rep.lines())
    if not rep.type_preserving:
        sys.exit(1)


@tos.command("assemble")
@click.argument("tos_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--total", is_flag=True, help="Assemble X instead of the coned-off space.")
@_out
@click.pass_obj
def tos_assemble(c: Ctx, tos_file, total):
    try:
        t = _load_tos(c, tos_file)
        asm = assemble_total(t) if total else assemble_coned(t)
    except RelHypError as exc:
        _fail(exc)
    c.flush(dump_graph(asm.graph), header=False)


@tos.command("conelocus")
@click.argument("tos_file", type=click.Path(exists=True, dir_okay=False))
@_out
@click.pass_obj
def tos_conelocus(c: Ctx, tos_file):
    try:
        t = _load_tos(c, tos_file)
        rep = cone_locus(t, assemble_coned(t))
    except RelHypError as exc:
        _fail(exc)
    lines = [f"component={k.name} nodes={len(k.nodes)} tree_vertices={','.join(sorted(k.tree_vertices))} "
             f"horosphere={len(k.horosphere_vertices)}" for k in rep.components]
    c.flush([f"components={len(rep.components)}"] + lines)


@main.command()
@click.argument("tos_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--m", "m", type=int, required=True)
@click.option("--rho", type=int, required=True)
@click.option("--count", type=int, default=100)
@click.option("--cone-bounded", is_flag=True)
@_out
@click.pass_obj
def flare(c: Ctx, tos_file, m, rho, count, cone_bounded):
    """Sample hallways and report flare estimates (an estimator, not a proof)."""
    try:
        t = _load_tos(c, tos_file)
        asm = assemble_coned(t)
        try:
            hs = sample_hallways(t, asm, m, rho, count, c.seed, cone_bounded_only=cone_bounded)
        except ExhaustedBudget as exc:
            click.echo(f"warning=ExhaustedBudget found={len(exc.found)}", err=True)
            hs = exc.found
        rep = flare_report(hs, m, rho, c.seed)
    except (RelHypError, ValueError) as exc:
        _fail(exc)
    c.flush([h.line() for h in hs] + [rep.summary()])


@main.command()
@click.option("--matrix", required=True, help="a,b,c,d")
@click.option("--n", "n", type=int, required=True)
@click.option("--k", "k", type=float, required=True)
@click.option("--segments", type=click.Path(exists=True, dir_okay=False), default=None)
@_out
@click.pass_obj
def stretch(c: Ctx, matrix, n, k, segments):
    """Stretch check of flat segments under powers of a linear map."""
    try:
        pa = LinearPA.from_entries(*matrix.split(","))
        segs = []
        if segments:
            for raw in c.read(segments).splitlines():
                p = raw.split("#", 1)[0].split()
                if p:
                    if p[0] != "s" or len(p) != 3:
                        raise ValueError(f"bad segment record {raw!r}")
                    segs.append(FlatSegment(float(p[1]), float(p[2])))
        else:
            segs = [FlatSegment(1.0, 0.0), FlatSegment(0.0, 1.0), FlatSegment(1.0, 1.0)]
        v = check_stretch(pa, n, k, segs)
    except (RelHypError, ValueError) as exc:
        _fail(exc)
    c.flush([f"mu={pa.mu:.12f} n={n} k={k} segments={len(segs)} all_pass={int(v.all_pass)} min_n={v.min_n}"])


@main.command("verify-combination")
@click.argument("tos_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--rho", type=int, default=8, show_default=True)
@click.option("--count", type=int, default=100, show_default=True)
@click.option("--max-m", type=int, default=8, show_default=True)
@_out
@click.pass_obj
def verify_combination(c: Ctx, tos_file, rho, count, max_m):
    """Check the combination hypotheses and measure the conclusion."""
    res = combination(_load_tos(c, tos_file), eps=c.eps, cap=c.cap, seed=c.seed,
                      rho=rho, count=count, max_m=max_m)
    c.flush(res.lines + [f"verdict={'pass' if res.ok else 'fail'} failed_stage={res.failed_stage or '-'}"])
    if not res.ok:
        sys.exit(1)


@main.command("verify-converse")
@click.argument("N", type=int)
@click.argument("D0", type=int)
@_out
@click.pass_obj
def verify_converse(c: Ctx, n, d0):
    """Build the parallel-cones witness and check discrepancy growth."""
    try:
        res = converse(n, d0, c.eps)
    except RelHypError as exc:
        _fail(exc)
    c.flush(res.lines + [f"verdict={'pass' if res.ok else 'fail'} failed_stage={res.failed_stage or '-'}"])
    if not res.ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
