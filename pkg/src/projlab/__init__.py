"""projlab: exact-rational projection geometry on layered equivalence structures.

The package builds finite truncations of four structure families, embeds them
into exact inner-product spaces, and mechanically verifies the interplay of
orthogonal projections, weak closures, and order-theoretic ranks: commuting
projections against one-basedness, alternating-projection fixed points,
canonical bases, and foundation / forking / splitting ranks.
"""

from .structures import (
    INFINITE,
    ClassId,
    LayeredStructure,
    PointId,
    all_classes,
    bdd_basis,
    class_of,
    classes_at_level,
    coarsening,
    common_level,
    enumerate_points,
    from_descriptor,
    mixed_kernel,
    pure_set,
    refining,
    to_descriptor,
)
from .hilbert import (
    GeneratorId,
    InnerSpace,
    Vec,
    atom_gen,
    class_gen,
    embed,
    formal_gen,
    free_space,
    gram,
    gram_space,
    inner,
    kernel_level_values,
    kernel_point,
    kernel_value,
    norm_sq,
    points_gram,
    psd_check,
    structure_space,
    zero_vec,
)
from .subspaces import (
    AlternateResult,
    Subspace,
    alternate,
    commute_check,
    generator_span,
    intersect,
    project,
    residual,
    span,
)
from .posets import CycleError, Poset, RankMap, chain_probe, foundation_rank
from .closures import (
    ClosureMembershipError,
    ElementTag,
    TypeDef,
    WeakClosure,
    bdd_subspace,
    canonical_base,
    element_seeds,
    forking_order,
    forking_rank,
    link_step,
    nonforking_restriction,
    piece_type,
    points_type,
    projection_order,
    realizations,
    subset_sum_type,
    subspace_family,
    weak_closure,
    weak_limit,
)
from .probes import (
    angled_lines,
    angled_lines_report,
    asym_free_check,
    commuting_report,
    one_based_check,
    scattered_probe,
)
from .ranks import DeltaTypeSpace, base_type, delta_space, realization_set, shelah_rank

__all__ = [name for name in dir() if not name.startswith("_")]
