"""Desk-scale computational workbench for field-reconstruction experiments.

Subpackages cover exact arithmetic over small finite fields (`ffcore`),
flag maps and c-pairs on finite F_p-spaces (`flagmap`), point/divisorial/
flag valuations with residue calculus on rational function fields
(`valuation`), degree-weighted divisor calculus and Kummer pairings on the
projective line (`curvegal`), l-adic divisor decomposition on the
projective plane (`ladicdiv`), and axiomatic projective geometry with
synthetic coordinatization (`projgeom`).  `cli` exposes the whole surface
as `gfl <group> <op>` subcommands emitting JSON reports.
"""

__version__ = "0.1.0"
