"""Run the numerical experiments on the built-in meshes and write CSVs.

    python scripts/run_experiments.py [outdir] [--nmax 10] [--quick]

Produces, per mesh, ``cardinality_<mesh>.csv`` (candidates, interior
points and rule size per degree), ``trials_<mesh>.csv`` (random linear
powers), ``testfuncs_<mesh>.csv`` and ``bench_<mesh>.csv``.
"""
import argparse
import time
from pathlib import Path

from polyquad import meshes
from polyquad.basis import dimension
from polyquad.experiments import ExperimentReport, bench, exactness_trials, function_errors
from polyquad.tchakaloff import TchakaloffConfig, tetra_free_rule

# star centers for meshes whose vertex centroid is not in the kernel
CENTERS = {"l_prism": (0.5, 0.5, 0.5)}
# evaluation points for the test functions
P0 = {"icosahedron": (1.0, 1.0, 1.0)}


def cardinality_table(mesh, degrees, cfg):
    rep = ExperimentReport(["degree", "N", "candidates", "interior", "cardinality",
                            "refinements", "residual", "seconds"])
    for n in degrees:
        t0 = time.perf_counter()
        rule, build = tetra_free_rule(mesh, n, cfg, return_report=True)
        rep.add(degree=n, N=dimension(n), candidates=build.candidates[-1],
                interior=build.interior[-1], cardinality=rule.cardinality,
                refinements=len(build.candidates) - 1, residual=rule.residual,
                seconds=time.perf_counter() - t0)
    return rep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", nargs="?", default="results")
    ap.add_argument("--nmax", type=int, default=10)
    ap.add_argument("--quick", action="store_true", help="10 trials, degrees up to 6")
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    nmax = min(args.nmax, 6) if args.quick else args.nmax
    trials = 10 if args.quick else 100
    degrees = list(range(1, nmax + 1))
    cfg = TchakaloffConfig()

    for name, make in meshes.SHIPPED.items():
        mesh = make()
        center = CENTERS.get(name)
        jobs = {
            "cardinality": lambda: cardinality_table(mesh, degrees, cfg),
            "trials": lambda: exactness_trials(mesh, degrees, trials, 0, cfg, center),
            "testfuncs": lambda: function_errors(mesh, degrees, P0.get(name, (1.5, 1.5, 1.5)),
                                                 cfg, center),
            "bench": lambda: bench(mesh, degrees, cfg),
        }
        for kind, job in jobs.items():
            t0 = time.perf_counter()
            path = out / f"{kind}_{name}.csv"
            path.write_text(job().to_csv())
            print(f"{path}  ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
