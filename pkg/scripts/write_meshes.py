"""Export the built-in test polyhedra to meshes/*.off."""
import sys
from pathlib import Path

from polyquad import meshes
from polyquad.geometry import write_off

EXTRA = {"cube_with_cavity": meshes.cube_with_cavity, "u_prism": meshes.u_prism}


def main(outdir="meshes"):
    out = Path(outdir)
    out.mkdir(exist_ok=True)
    for name, make in {**meshes.SHIPPED, **EXTRA}.items():
        write_off(make(), out / f"{name}.off")
        print(out / f"{name}.off")


if __name__ == "__main__":
    main(*sys.argv[1:])
