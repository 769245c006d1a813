"""Exact Tate cohomology, p-Brauer characters and moonshine q-series checks."""

from .brauer import (
    CoeffTable,
    TorsionCycModule,
    base_change,
    coeff_closed_form,
    coeff_dft_oracle,
    hauptmodul_combination,
    p_brauer_character,
    super_brauer_rnm,
)
from .cyclotomic import CycNumber, RamificationContext
from .exactlinalg import FiniteAbelianGroup, IntMatrix, smith_normal_form
from .qseries import (
    EtaQuotientSpec,
    LaurentQSeries,
    eta_quotient_series,
    euler_product,
    h0_h1_split,
    load_mt_table,
    mckay_thompson,
    series_combine,
    tau_half_shift,
)
from .tate import CyclicAction, PresentedModule, TateResult, tate_free, tate_presented

__all__ = [
    "CoeffTable",
    "CycNumber",
    "CyclicAction",
    "EtaQuotientSpec",
    "FiniteAbelianGroup",
    "IntMatrix",
    "LaurentQSeries",
    "PresentedModule",
    "RamificationContext",
    "TateResult",
    "TorsionCycModule",
    "base_change",
    "coeff_closed_form",
    "coeff_dft_oracle",
    "eta_quotient_series",
    "euler_product",
    "h0_h1_split",
    "hauptmodul_combination",
    "load_mt_table",
    "mckay_thompson",
    "p_brauer_character",
    "series_combine",
    "smith_normal_form",
    "super_brauer_rnm",
    "tate_free",
    "tate_presented",
    "tau_half_shift",
]
