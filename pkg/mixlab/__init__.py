from __future__ import division, print_function
from mixlab.grid_field import GridSpec, TracerField, Tiling, init_pattern, mixed_level
from mixlab.blocks import (
    canonical_interleave_block, baker_block, deep_block, swirl_block, apply_block, block_cost
    )
from mixlab.composer import CellularFlow, Schedule, SigmaSequence, run_flow, global_velocity
from mixlab.diagnostics import (
    MixParams, geometric_mixing_scale, functional_mixing_scale,
    characteristic_length_scale, unmixedness_certificate, sobolev_norm,
    lusin_lipschitz_profile
    )
from mixlab.budgets import (
    transport_cost, minimal_cost_check, enstrophy_schedule, palenstrophy_schedule, decay_fit
    )
from mixlab.manifest import RunManifest
