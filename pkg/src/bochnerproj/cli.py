"""Command-line entry point.

Subcommands:
    verify      run one verification suite (or all) and write a report
    project     project the element of an instance file onto its set
    derivative  closed-form directional derivative plus quotient cross-check
    demo        the worked two-atom examples

Exit codes: 0 pass, 1 fail, 2 derivative not covered, 3 input error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import suites
from .derivatives import (
    NOT_COVERED,
    d_project_ball,
    d_project_cylinder,
    d_project_subspace,
    safe_fd_schedule,
)
from .instances import (
    Instance,
    InstanceFormatError,
    load_instance,
    save_json,
)
from .oracle import fd_derivative, oracle_project
from .projections import (
    BallSpec,
    CylinderSpec,
    classify,
    project_ball,
    project_cylinder,
    project_subspace,
)
from .space import (
    BochnerElement,
    BochnerSpaceSpec,
    InnerNormSpec,
    MeasureSpace,
    SupportSet,
    norm_lp,
    zeros,
)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="bochnerproj",
        description="metric projections and their directional derivatives, verified",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument(
        "--suite",
        default="all",
        help="duality | smoothness | projections | derivatives | hilbert | all",
    )
    ver.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
    ver.add_argument(
        "--instances",
        type=int,
        default=0,
        help="instances per family (0 = suite default)",
    )
    ver.add_argument("--out", default=None, help="report file (JSON)")
    ver.add_argument(
        "--jobs",
        type=int,
        default=0,
        help="worker processes (0 = auto, 1 = serial)",
    )
    ver.add_argument("--psi", choices=("analytic", "numeric"), default="analytic")

    proj = sub.add_parser("project", help="project an instance file")
    proj.add_argument("--in", dest="infile", required=True)
    proj.add_argument("--out", default=None)

    der = sub.add_parser("derivative", help="directional derivative of an instance")
    der.add_argument("--in", dest="infile", required=True)
    der.add_argument("--out", default=None)

    sub.add_parser("demo", help="worked two-atom examples")
    return parser


def _emit(payload, out):
    import json

    if out:
        save_json(out, payload)
    else:
        print(json.dumps(payload, indent=2))


def _cmd_verify(args) -> int:
    jobs = args.jobs if args.jobs > 0 else suites.default_jobs()
    instances = args.instances if args.instances > 0 else None
    try:
        reports = suites.run_suite(
            args.suite, seed=args.seed, instances=instances, jobs=jobs, psi=args.psi
        )
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 3
    for rep in reports:
        for line in rep.summary_lines():
            print(line)
    payload = {
        "reports": [rep.to_dict() for rep in reports],
        "overall_pass": all(rep.overall_pass for rep in reports),
    }
    if args.out:
        try:
            save_json(args.out, payload)
        except OSError as exc:
            print(f"cannot write report: {exc}", file=sys.stderr)
            return 3
    return 0 if payload["overall_pass"] else 1


def _project_for(instance: Instance):
    spec = instance.set_spec
    g = instance.element
    if isinstance(spec, SupportSet):
        return project_subspace(g, spec), None
    if isinstance(spec, BallSpec):
        return project_ball(g, spec), classify(g, spec).name
    if isinstance(spec, CylinderSpec):
        return project_cylinder(g, spec), classify(g, spec.base).name
    raise InstanceFormatError("instance file carries no feasible set")


def _cmd_project(args) -> int:
    try:
        instance = load_instance(args.infile)
        projected, region = _project_for(instance)
    except InstanceFormatError as exc:
        print(exc, file=sys.stderr)
        return 3
    payload = {
        "projection": projected.values.tolist(),
        "region": region,
        "distance": norm_lp(instance.element - projected),
    }
    try:
        _emit(payload, args.out)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 3
    return 0


def _cmd_derivative(args) -> int:
    try:
        instance = load_instance(args.infile)
        if instance.direction is None:
            raise InstanceFormatError("instance file carries no direction")
        spec = instance.set_spec
        g, h = instance.element, instance.direction
        if isinstance(spec, SupportSet):
            closed = d_project_subspace(g, h, spec)
            project = lambda x: project_subspace(x, spec)
        elif isinstance(spec, BallSpec):
            closed = d_project_ball(g, h, spec)
            project = lambda x: project_ball(x, spec)
        elif isinstance(spec, CylinderSpec):
            closed = d_project_cylinder(g, h, spec)
            project = lambda x: project_cylinder(x, spec)
        else:
            raise InstanceFormatError("instance file carries no feasible set")
    except InstanceFormatError as exc:
        print(exc, file=sys.stderr)
        return 3
    if closed is NOT_COVERED:
        payload = {"status": "not_covered"}
        try:
            _emit(payload, args.out)
        except OSError as exc:
            print(f"cannot write output: {exc}", file=sys.stderr)
            return 3
        return 2
    fd = fd_derivative(project, g, h, safe_fd_schedule(g, h, spec))
    payload = {
        "status": "ok",
        "closed_form": closed.values.tolist(),
        "fd_estimate": fd.estimate.values.tolist(),
        "fd_error_bound": fd.error_bound,
        "residual": norm_lp(closed - fd.estimate),
    }
    try:
        _emit(payload, args.out)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 3
    return 0


def _cmd_demo() -> int:
    space = BochnerSpaceSpec(
        MeasureSpace(np.array([1.0, 1.0])), InnerNormSpec(1, 2.0), 2.0
    )
    g = BochnerElement(space, np.array([[2.0], [3.0]]))
    support = SupportSet(space, [0])
    ball = BallSpec(support=support, center=zeros(space), rad=1.0)
    cyl = CylinderSpec(ball)

    print("two atoms of weight 1, scalar values, p = 2, rho = 2")
    print("element g = (2, 3); support A = {atom 0}; radius 1, center 0")
    ok = True

    pb = project_ball(g, ball)
    ob = oracle_project(g, ball)
    print(
        f"  ball projection:     ({pb.values[0, 0]:g}, {pb.values[1, 0]:g})"
        "   expected (1, 0)   [derived: brute-force oracle minimization]"
    )
    print(
        f"    oracle agrees to {norm_lp(pb - ob.minimizer):.2e}; "
        f"distance {ob.objective:.12g} (= sqrt(10) = {np.sqrt(10):.12g})"
    )
    ok &= np.allclose(pb.values.ravel(), [1.0, 0.0], atol=1e-12)
    ok &= norm_lp(pb - ob.minimizer) < 1e-4

    pc = project_cylinder(g, cyl)
    oc = oracle_project(g, cyl)
    print(
        f"  cylinder projection: ({pc.values[0, 0]:g}, {pc.values[1, 0]:g})"
        "   expected (1, 3)   [derived: brute-force oracle minimization]"
    )
    print(
        f"    oracle agrees to {norm_lp(pc - oc.minimizer):.2e}; "
        f"distance {oc.objective:.12g} (= 1)"
    )
    ok &= np.allclose(pc.values.ravel(), [1.0, 3.0], atol=1e-12)
    ok &= norm_lp(pc - oc.minimizer) < 1e-4
    print("demo: PASS" if ok else "demo: FAIL")
    return 0 if ok else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "project":
        return _cmd_project(args)
    if args.command == "derivative":
        return _cmd_derivative(args)
    if args.command == "demo":
        return _cmd_demo()
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
