"""symfactor: command-line access to every operation of the package.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or
input errors.  Every randomized command requires --seed.
"""

import argparse
import random
import sys

from .algebra import ParseError, exact_rank
from .bounds import BoundInput, InconsistentBounds, k_bounds
from .factorization import (
    SearchStatus, SearchStrategy, UnsupportedSearch, factor_elementary_7, random_chain, search_k_factor,
)
from .fiber import ReductionError, in_singular_set, jacobian_phi, reduce_fiber, verify_reduction
from .formats import format_vector, parse_vector, read_chain, read_matrix, write_chain, write_matrix
from .rings import Ring
from .symplectic import (
    ElementaryChain, FactorChain, FormKind, SymplecticForm, is_symplectic, materialize_elementary, phi, psi,
    skew_basis_conjugate,
)


class UsageError(Exception):
    pass


def _read(path):
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _elementary_chain(text):
    chain, ring = read_chain(text)
    if not isinstance(chain, ElementaryChain):
        raise UsageError("expected a chain of elementary (minus/plus) factors")
    return chain, ring


def _single_elementary(text):
    chain, ring = _elementary_chain(text)
    if chain.K != 1:
        raise UsageError(f"expected exactly one elementary factor, got {chain.K}")
    return chain.factors[0], ring


def _matrix_or_chain(text):
    """A matrix document, or a chain whose product is taken."""
    if text.lstrip().startswith("chain"):
        chain, ring = read_chain(text)
        return (chain.product() if isinstance(chain, FactorChain) else psi(chain)), ring
    return read_matrix(text)


def cmd_verify(args, out):
    m, _ = read_matrix(_read(args.input))
    if m.rows != m.cols or m.rows % 2:
        raise UsageError("matrix must be square of even size")
    form = SymplecticForm(FormKind(args.form), m.rows // 2)
    ok = is_symplectic(m, form)
    out.write(f"symplectic: {'true' if ok else 'false'}\n")
    return 0 if ok else 1


def cmd_make_elementary(args, out):
    e, ring = _single_elementary(_read(args.input))
    m = materialize_elementary(e)
    if args.skew:
        m = skew_basis_conjugate(m)
    out.write(write_matrix(m, ring))
    return 0


def cmd_factor7(args, out):
    e, ring = _single_elementary(_read(args.input))
    result = factor_elementary_7(e)
    out.write(write_chain(result.chain, ring))
    return 0


def cmd_verify_product(args, out):
    target, _ = _matrix_or_chain(_read(args.target))
    chain, _ = read_chain(_read(args.input))
    product = chain.product() if isinstance(chain, FactorChain) else psi(chain)
    ok = product == target
    out.write(f"product matches target: {'true' if ok else 'false'}\n")
    return 0 if ok else 1


def cmd_search(args, out):
    target, ring = _matrix_or_chain(_read(args.input))
    outcome = search_k_factor(target, args.k, SearchStrategy(args.strategy), restarts=args.restarts, seed=args.seed)
    if outcome.status is SearchStatus.FOUND:
        out.write("status: found\n")
        out.write(write_chain(outcome.factors, ring))
        return 0
    out.write("status: not-found-evidence\n")
    if outcome.note:
        out.write(f"note: {outcome.note}\n")
    report = outcome.residual_report
    if report is not None:
        out.write(f"restarts: {report.restarts}\n")
        out.write(f"min-residual: {report.min_residual:.3e}\n")
        out.write(f"best-leading: {report.best_leading.value}\n")
    return 0


def cmd_psi(args, out):
    chain, ring = _elementary_chain(_read(args.input))
    out.write(write_matrix(psi(chain), ring))
    return 0


def cmd_phi(args, out):
    chain, ring = _elementary_chain(_read(args.input))
    v = phi(chain).vector
    out.write(f"matrix 1 {len(v)} {ring}\n{format_vector(tuple(ring.coerce(x) for x in v))}\n")
    return 0


def cmd_singular(args, out):
    chain, _ = _elementary_chain(_read(args.input))
    out.write(f"singular: {'true' if in_singular_set(chain) else 'false'}\n")
    return 0


def cmd_jacobian(args, out):
    chain, _ = _elementary_chain(_read(args.input))
    jac = jacobian_phi(chain)
    if args.rank:
        out.write(f"rank: {exact_rank(jac)} of {jac.rows}\n")
    else:
        out.write(write_matrix(jac))
    return 0


def _target(args):
    try:
        target = parse_vector(args.target)
    except ParseError as e:
        raise ParseError(f"--target: {e.message}", e.position) from None
    if len(target) != 2 * args.n:
        raise UsageError(f"--target needs {2 * args.n} entries, got {len(target)}")
    return target


def cmd_reduce(args, out):
    plan = reduce_fiber(_target(args), args.K, args.n)
    out.write(plan.describe() + "\n")
    return 0


def cmd_verify_reduce(args, out):
    plan = reduce_fiber(_target(args), args.K, args.n)
    report = verify_reduction(plan, trials=args.trials, seed=args.seed)
    out.write(report.text() + "\n")
    return 0 if report.ok else 1


def cmd_bounds(args, out):
    result = k_bounds(BoundInput(args.n, args.d, args.ktilde, args.kcont2))
    out.write(result.text() + "\n")
    return 0


def cmd_gen(args, out):
    ring = Ring.parse(args.ring)
    chain = random_chain(args.n, args.K, random.Random(args.seed), ring, args.bound)
    if args.output == "chain":
        out.write(write_chain(chain, ring))
    else:
        out.write(write_matrix(ring.coerce_matrix(psi(chain)), ring))
    return 0


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _ring_name(text):
    try:
        Ring.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'gaussian' or 'poly:<m>', got {text!r}") from None
    return text


def build_parser():
    p = argparse.ArgumentParser(prog="symfactor", description="Exact unitriangular factorization of symplectic matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, input_help=None):
        s = sub.add_parser(name, help=help_text, description=help_text)
        if input_help:
            s.add_argument("input", nargs="?", default="-", help=input_help + " (default: standard input)")
        s.set_defaults(func=func)
        return s

    s = add("verify", cmd_verify, "check H^T Omega H = Omega for a matrix", "matrix file")
    s.add_argument("--form", choices=["std", "skew"], default="std", help="standard form or skew-diagonal form")

    s = add("make-elementary", cmd_make_elementary, "materialize a single elementary factor as a matrix",
            "chain file with one minus/plus factor")
    s.add_argument("--skew", action="store_true", help="print the conjugate C^-1 M C for the skew form instead")

    add("factor7", cmd_factor7, "split an elementary factor into 7 standard factors", "chain file with one minus/plus factor")

    s = add("verify-product", cmd_verify_product, "check that a chain multiplies out to a target", "chain file")
    s.add_argument("--target", required=True, help="matrix file, or chain file whose product is the target")

    s = add("search", cmd_search, "look for a chain of k standard factors", "matrix or chain file")
    s.add_argument("--k", type=_positive, required=True, help="number of factors")
    s.add_argument("--strategy", choices=[x.value for x in SearchStrategy], default="exact")
    s.add_argument("--restarts", type=_positive, default=200, help="numeric restarts")
    s.add_argument("--seed", type=int, required=True)

    add("psi", cmd_psi, "product of an elementary chain", "chain file")
    add("phi", cmd_phi, "last row of the product of an elementary chain", "chain file")
    add("singular", cmd_singular, "test membership in the singular set of phi", "chain file")
    s = add("jacobian", cmd_jacobian, "exact Jacobian of phi at a constant chain", "chain file")
    s.add_argument("--rank", action="store_true", help="print only the exact rank")

    for name, func, help_text in (("reduce", cmd_reduce, "eliminate a fiber of phi down to one equation"),
                                  ("verify-reduce", cmd_verify_reduce, "check a fiber reduction at random points")):
        s = add(name, func, help_text)
        s.add_argument("--n", type=_positive, required=True)
        s.add_argument("--K", type=_positive, required=True)
        s.add_argument("--target", required=True, help="2n whitespace-separated scalars")
        if name == "verify-reduce":
            s.add_argument("--trials", type=_positive, default=50)
            s.add_argument("--seed", type=int, required=True)

    s = add("bounds", cmd_bounds, "lower and upper bounds on the factor count")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--ktilde", type=_positive, help="known elementary factor count")
    s.add_argument("--kcont2", type=_positive, help="known continuous factor count for n = 2")

    s = add("gen", cmd_gen, "random elementary chain, or its product")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--ring", type=_ring_name, default="gaussian")
    s.add_argument("--bound", type=_positive, default=3, help="size of random integer entries")
    s.add_argument("--output", choices=["chain", "matrix"], default="chain")
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    try:
        return args.func(args, out)
    except ParseError as e:
        print(f"symfactor: parse error: {e}", file=sys.stderr)
    except (UsageError, UnsupportedSearch, ReductionError, InconsistentBounds) as e:
        print(f"symfactor: {e}", file=sys.stderr)
    except ValueError as e:
        print(f"symfactor: invalid input: {e}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
