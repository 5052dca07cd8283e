"""Shared group/domain constructions, cached per test session."""

import functools

import numpy as np

from ibiskit import actions, linalg
from ibiskit.actions import (
    build_group_action, build_nonsingular_points, build_projective_points,
    build_quad_forms_domain, build_subspace_domain, build_totally_singular,
)
from ibiskit.gf import field_of_order
from ibiskit.groups import GroupSpec
from ibiskit.linalg import canonicalize, quadratic_minus, quadratic_plus, symplectic_form


@functools.lru_cache(maxsize=None)
def named_case(name):
    """(PermGroup, ActionDomain) for the named acceptance configuration."""
    builders = {
        "SL3_2/proj7": lambda: _case(GroupSpec("SL", 3, 2),
                                     build_projective_points(3, 2)),
        "SL4_2/proj15": lambda: _case(GroupSpec("SL", 4, 2),
                                      build_projective_points(4, 2)),
        "Sp4_2/vec15": lambda: _case(GroupSpec("Sp", 4, 2),
                                     build_projective_points(4, 2)),
        "Sp4_2'/vec15": lambda: _case(GroupSpec("Sp", 4, 2, derived=True),
                                      build_projective_points(4, 2)),
        "PGL2_5/proj6": lambda: _case(GroupSpec("GL", 2, 5),
                                      build_projective_points(2, 5)),
        "SL2_4/minus6": lambda: _case(GroupSpec("Sp", 2, 4),
                                      build_quad_forms_domain(1, 4, "-")),
        "SL2_8/minus28": lambda: _case(GroupSpec("Sp", 2, 8),
                                       build_quad_forms_domain(1, 8, "-")),
        "PSp4_3/proj40": lambda: _case(GroupSpec("Sp", 4, 3),
                                       build_projective_points(4, 3)),
        "PSp4_3/lines40": lambda: _case(
            GroupSpec("Sp", 4, 3),
            build_totally_singular(symplectic_form(field_of_order(3), 4), 2)),
        "GL4_2/sub35": lambda: _case(GroupSpec("GL", 4, 2),
                                     build_subspace_domain(4, 2, 2)),
        "PSL3_3/proj13": lambda: _case(GroupSpec("SL", 3, 3),
                                       build_projective_points(3, 3)),
        "PSL4_3/proj40": lambda: _case(GroupSpec("SL", 4, 3),
                                       build_projective_points(4, 3)),
        "AutPSL2_4/proj5": lambda: _case(GroupSpec("SL", 2, 4, extensions=("frob",)),
                                         build_projective_points(2, 4)),
        "Om4p4/ns60": lambda: _case(
            GroupSpec("OmegaPlus", 4, 4),
            build_nonsingular_points(quadratic_plus(field_of_order(4), 4))),
        "Om4m4/ns68": lambda: _case(
            GroupSpec("OmegaMinus", 4, 4),
            build_nonsingular_points(quadratic_minus(field_of_order(4), 4))),
        "SO4p4/ns60": lambda: _case(
            GroupSpec("SOplus", 4, 4),
            build_nonsingular_points(quadratic_plus(field_of_order(4), 4))),
        "SO4m4/ns68": lambda: _case(
            GroupSpec("SOminus", 4, 4),
            build_nonsingular_points(quadratic_minus(field_of_order(4), 4))),
        "Om6p2/ns28": lambda: _case(
            GroupSpec("OmegaPlus", 6, 2),
            build_nonsingular_points(quadratic_plus(field_of_order(2), 6))),
        "SO6p2/ns28": lambda: _case(
            GroupSpec("SOplus", 6, 2),
            build_nonsingular_points(quadratic_plus(field_of_order(2), 6))),
        "Sp4_2/omega_plus10": lambda: _case(GroupSpec("Sp", 4, 2),
                                            build_quad_forms_domain(2, 2, "+")),
        "Sp4_2'/omega_plus10": lambda: _case(GroupSpec("Sp", 4, 2, derived=True),
                                             build_quad_forms_domain(2, 2, "+")),
        "Sp4_2/omega_minus6": lambda: _case(GroupSpec("Sp", 4, 2),
                                            build_quad_forms_domain(2, 2, "-")),
        "Sp4_4/omega_plus136": lambda: _case(GroupSpec("Sp", 4, 4),
                                             build_quad_forms_domain(2, 4, "+")),
        "PSU3_2/iso9": lambda: _case(
            GroupSpec("SU", 3, 2),
            build_totally_singular(
                linalg.hermitian_form(field_of_order(4), 3, conj_power=1), 1)),
    }
    G, dom = builders[name]()
    return G, dom


def _case(spec, dom):
    return build_group_action(spec, dom), dom


def subspace_point(dom, *vectors):
    """Domain index of the subspace spanned by the given vectors."""
    F = dom.field
    d = dom.points[0].ambient_dim
    return dom.index_of(canonicalize(F, d, [np.array(v) for v in vectors]))


def pair_point(dom, small_vectors, big_vectors):
    F = dom.field
    d = dom.points[0][0].ambient_dim
    W = canonicalize(F, d, [np.array(v) for v in small_vectors])
    U = canonicalize(F, d, [np.array(v) for v in big_vectors])
    pair = tuple(sorted((W, U), key=lambda s: (s.dim, s.key())))
    return dom.index_of(pair)


def form_point(dom, a):
    return dom.index_of(actions.QuadFormPoint(np.array(a)))
