"""Two-row disjunctive cuts: facet enumeration, strengthening and separation rounds."""
from .cglp import (BINARY, MIP, Cut, Multipliers, alpha_from_multipliers, build_cglp,
                   convex_combination, enumerate_facets, is_integer_hull_facet, solve_cglp,
                   verify_cut_valid)
from .fixed_shapes import FixedShape, applicable_shapes, shape_cut
from .harness import RoundOptions, gap_experiment, run_rounds
from .instance_io import Instance, RoundReport, parse_mps, read_optima, read_report, write_report
from .octahedron import Body, ParametricBody, classify, intersection_cut
from .rowsystem import QRowSystem, alww_instance, from_tableau
from .simplex import LpSolution, TableauRow, extract_rows, solve_lp
from .strengthen import gmi_cut, strengthen_cut, strengthen_cut_monoidal, strengthen_standard

__version__ = "0.1.0"
