"""Mortality and climate-index panel ingestion.

CSV is the only ingestion format: one row per observation, dates as integer
year and month columns, UTF-8 with a header row. Loaded panels are immutable
and rectangular; every (region, gender, age_band, month) combination must be
present exactly once. Monthly exposures may be supplied directly or derived
from yearly values by dividing by 12.

The module also houses the seeded synthetic-data generator used throughout
the test suite: a log-bilinear mortality surface with a climate-driven excess
term, Poisson death counts, and seasonal climate-index series with correlated
innovations.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    InvalidSpec,
    MissingCell,
    MissingMonth,
    NonPositiveExposure,
    ParseError,
    UnknownComponent,
)
from .rng import SeededStream

REGIONS = ("CEA", "CWP", "MID", "SEA", "SPL", "SWP")
GENDERS = ("male", "female")
AGE_LOWS = tuple(range(40, 85, 5))
ACI_COMPONENTS = ("T90", "T10", "P", "D", "W")

MORTALITY_COLUMNS = ("region", "gender", "age_low", "year", "month",
                     "deaths", "exposure_yearly")
ACI_COLUMNS = ("region", "component", "year", "month", "value")


@dataclass(frozen=True)
class Window:
    """Inclusive calendar window; month_index 0 is (start_year, start_month)."""

    start_year: int = 1999
    start_month: int = 1
    end_year: int = 2019
    end_month: int = 12

    @property
    def n_months(self) -> int:
        return ((self.end_year - self.start_year) * 12
                + (self.end_month - self.start_month) + 1)

    def month_index(self, year: int, month: int) -> int:
        idx = (year - self.start_year) * 12 + (month - self.start_month)
        if idx < 0 or idx >= self.n_months:
            raise ParseError(
                f"({year}, {month}) outside window "
                f"{self.start_year}-{self.start_month:02d} .. "
                f"{self.end_year}-{self.end_month:02d}")
        return idx

    def year_month(self, month_index: int) -> tuple[int, int]:
        if month_index < 0 or month_index >= self.n_months:
            raise ParseError(f"month_index {month_index} outside window")
        total = (self.start_year * 12 + self.start_month - 1) + month_index
        return total // 12, total % 12 + 1


@dataclass(frozen=True)
class MortalityCell:
    region: str
    gender: str
    age_low: int
    month_index: int
    deaths: int
    exposure: float

    def __post_init__(self):
        if self.deaths < 0:
            raise ParseError(f"negative deaths in cell {self.key()}")
        if not self.exposure > 0.0:
            raise NonPositiveExposure(f"exposure {self.exposure} in cell {self.key()}")

    def key(self) -> tuple[str, str, int, int]:
        return (self.region, self.gender, self.age_low, self.month_index)


@dataclass(frozen=True)
class PanelIndex:
    """Dense positional index over a rectangular mortality panel."""

    regions: tuple[str, ...]
    genders: tuple[str, ...]
    age_lows: tuple[int, ...]
    month_range: tuple[int, int]  # inclusive

    @property
    def n_months(self) -> int:
        return self.month_range[1] - self.month_range[0] + 1

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (len(self.regions), len(self.genders), len(self.age_lows),
                self.n_months)

    @property
    def n_cells(self) -> int:
        r, g, a, t = self.shape
        return r * g * a * t

    def position(self, region: str, gender: str, age_low: int,
                 month_index: int) -> int:
        try:
            ri = self.regions.index(region)
            gi = self.genders.index(gender)
            ai = self.age_lows.index(age_low)
        except ValueError as exc:
            raise MissingCell(f"({region}, {gender}, {age_low}) not in panel") from exc
        ti = month_index - self.month_range[0]
        if ti < 0 or ti >= self.n_months:
            raise MissingCell(f"month_index {month_index} not in panel")
        _, g, a, t = self.shape
        return ((ri * g + gi) * a + ai) * t + ti

    def keys(self):
        for region in self.regions:
            for gender in self.genders:
                for age_low in self.age_lows:
                    for m in range(self.month_range[0], self.month_range[1] + 1):
                        yield (region, gender, age_low, m)


class MortalityPanel:
    """Dense array view over a cell list: deaths and exposure (R, G, A, T)."""

    def __init__(self, cells: list[MortalityCell], index: PanelIndex):
        self.index = index
        self.cells = cells
        self.deaths = np.zeros(index.shape)
        self.exposure = np.zeros(index.shape)
        r, g, a, t = index.shape
        for cell in cells:
            pos = index.position(*cell.key())
            ijk = np.unravel_index(pos, index.shape)
            self.deaths[ijk] = cell.deaths
            self.exposure[ijk] = cell.exposure

    def submatrix(self, region: str, gender: str) -> tuple[np.ndarray, np.ndarray]:
        ri = self.index.regions.index(region)
        gi = self.index.genders.index(gender)
        return self.deaths[ri, gi], self.exposure[ri, gi]


def approximate_monthly_exposure(yearly_exposure: float) -> float:
    """Monthly person-time as one-twelfth of the yearly value."""
    if not yearly_exposure > 0.0:
        raise NonPositiveExposure(f"yearly exposure must be positive, got {yearly_exposure}")
    return yearly_exposure / 12.0


def _build_index(cells: list[MortalityCell]) -> PanelIndex:
    regions = tuple(sorted({c.region for c in cells}))
    genders = tuple(sorted({c.gender for c in cells}))
    ages = tuple(sorted({c.age_low for c in cells}))
    months = sorted({c.month_index for c in cells})
    index = PanelIndex(regions, genders, ages, (months[0], months[-1]))

    seen: dict[tuple, int] = {}
    for c in cells:
        if c.key() in seen:
            raise ParseError(f"duplicate cell {c.key()}")
        seen[c.key()] = 1
    for key in index.keys():
        if key not in seen:
            raise MissingCell(f"panel gap at (region, gender, age_low, month)={key}")
    return index


def load_mortality_csv(path, window: Window | None = None,
                       schema: dict[str, str] | None = None,
                       exposure_kind: str = "yearly",
                       ) -> tuple[list[MortalityCell], PanelIndex]:
    """Read a mortality panel; returns canonically ordered cells plus index.

    ``exposure_kind`` selects whether the exposure column holds yearly values
    (divided by 12 on load) or already-monthly person-time.
    """
    window = window or Window()
    colmap = dict(zip(MORTALITY_COLUMNS, MORTALITY_COLUMNS))
    if exposure_kind == "monthly":
        colmap["exposure_yearly"] = "exposure_monthly"
    elif exposure_kind != "yearly":
        raise ParseError(f"exposure_kind must be yearly|monthly, got {exposure_kind}")
    if schema:
        colmap.update(schema)

    path = Path(path)
    cells: list[MortalityCell] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError(f"{path}: empty file")
        missing = [v for v in colmap.values() if v not in reader.fieldnames]
        if missing:
            raise ParseError(f"{path}: header missing columns {missing}")
        for lineno, row in enumerate(reader, start=2):
            try:
                region = row[colmap["region"]].strip()
                gender = row[colmap["gender"]].strip()
                age_low = int(row[colmap["age_low"]])
                year = int(row[colmap["year"]])
                month = int(row[colmap["month"]])
                deaths = int(row[colmap["deaths"]])
                exposure = float(row[colmap["exposure_yearly"]])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if age_low not in AGE_LOWS:
                raise ParseError(
                    f"{path}:{lineno}: age_low {age_low} not a 5-year band "
                    f"lower bound in {AGE_LOWS[0]}..{AGE_LOWS[-1]}")
            if not exposure > 0.0:
                raise NonPositiveExposure(
                    f"{path}:{lineno}: non-positive exposure {exposure}")
            if exposure_kind == "yearly":
                exposure = approximate_monthly_exposure(exposure)
            try:
                month_index = window.month_index(year, month)
            except ParseError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            try:
                cells.append(MortalityCell(region, gender, age_low,
                                           month_index, deaths, exposure))
            except NonPositiveExposure as exc:
                raise NonPositiveExposure(f"{path}:{lineno}: {exc}") from exc
    if not cells:
        raise ParseError(f"{path}: no data rows")

    index = _build_index(cells)
    order = {key: pos for pos, key in enumerate(index.keys())}
    cells.sort(key=lambda c: order[c.key()])
    return cells, index


def write_mortality_csv(path, cells: list[MortalityCell], window: Window | None = None,
                        exposure_kind: str = "monthly") -> None:
    """Inverse of ``load_mortality_csv`` up to column order and formatting."""
    window = window or Window()
    header = list(MORTALITY_COLUMNS)
    if exposure_kind == "monthly":
        header[-1] = "exposure_monthly"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for c in cells:
            year, month = window.year_month(c.month_index)
            exposure = c.exposure if exposure_kind == "monthly" else c.exposure * 12.0
            writer.writerow([c.region, c.gender, c.age_low, year, month,
                             c.deaths, f"{exposure:.12g}"])


@dataclass(frozen=True)
class AciPanel:
    """One climate component's standardized monthly series for one region."""

    region: str
    component: str
    values: np.ndarray  # indexed by month_index, no gaps
    month_start: int = 0

    def __post_init__(self):
        if self.component not in ACI_COMPONENTS:
            raise UnknownComponent(
                f"component {self.component!r} not in {ACI_COMPONENTS} "
                "(sea level is excluded)")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def value_at(self, month_index: int) -> float:
        off = month_index - self.month_start
        if off < 0 or off >= len(self.values):
            raise MissingMonth(
                f"({self.region}, {self.component}) has no month {month_index}")
        return float(self.values[off])


def load_aci_csv(path, window: Window | None = None) -> dict[tuple[str, str], AciPanel]:
    """Read climate-index series keyed by (region, component).

    Every present (region, component) pair must cover a contiguous month
    span with no gaps; the sea-level component is rejected.
    """
    window = window or Window()
    path = Path(path)
    raw: dict[tuple[str, str], dict[int, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError(f"{path}: empty file")
        missing = [c for c in ACI_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ParseError(f"{path}: header missing columns {missing}")
        for lineno, row in enumerate(reader, start=2):
            try:
                region = row["region"].strip()
                component = row["component"].strip()
                year = int(row["year"])
                month = int(row["month"])
                value = float(row["value"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if component not in ACI_COMPONENTS:
                raise UnknownComponent(
                    f"{path}:{lineno}: component {component!r} not supported "
                    "(sea level is excluded)")
            try:
                month_index = window.month_index(year, month)
            except ParseError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            key = (region, component)
            series = raw.setdefault(key, {})
            if month_index in series:
                raise ParseError(f"{path}:{lineno}: duplicate ({key}, {year}-{month})")
            series[month_index] = value
    if not raw:
        raise ParseError(f"{path}: no data rows")

    panels: dict[tuple[str, str], AciPanel] = {}
    for key in sorted(raw):
        series = raw[key]
        lo, hi = min(series), max(series)
        gaps = [m for m in range(lo, hi + 1) if m not in series]
        if gaps:
            year, month = window.year_month(gaps[0])
            raise MissingMonth(f"{key} missing {year}-{month:02d} (month_index {gaps[0]})")
        values = np.array([series[m] for m in range(lo, hi + 1)])
        panels[key] = AciPanel(key[0], key[1], values, month_start=lo)
    return panels


def write_aci_csv(path, panels: dict[tuple[str, str], AciPanel],
                  window: Window | None = None) -> None:
    window = window or Window()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(ACI_COLUMNS)
        for key in sorted(panels):
            panel = panels[key]
            for off, value in enumerate(panel.values):
                year, month = window.year_month(panel.month_start + off)
                writer.writerow([panel.region, panel.component, year, month,
                                 f"{value:.12g}"])


# --- synthetic data ----------------------------------------------------------

@dataclass(frozen=True)
class SyntheticSpec:
    """Ground-truth generator configuration for desk-scale panels.

    Mortality follows a log-bilinear surface per (region, gender) with the
    period effect driven by a drifting seasonal recursion, plus optional
    excess terms linear in the region's T90 and T10 indices. Deaths are
    Poisson draws against the configured exposure.
    """

    seed: int
    regions: tuple[str, ...] = ("CEA", "MID")
    genders: tuple[str, ...] = GENDERS
    age_lows: tuple[int, ...] = AGE_LOWS
    n_months: int = 252
    exposure: float = 250_000.0
    alpha_top: float = -6.5        # log rate at the youngest band
    alpha_slope: float = 0.45      # increase per 5-year band
    beta_top: float = 0.22         # period-effect loading at the youngest band
    beta_slope: float = -0.015
    kappa_drift: float = -0.02     # per month, applied at lag 12
    kappa_season_amp: float = 0.35
    kappa_sigma: float = 0.05
    aci_season_amp: float = 1.0
    aci_ar: float = 0.4
    aci_sigma: float = 0.6
    excess_t90: float = 0.0
    excess_t10: float = 0.0
    innovation_corr: float = 0.5   # corr(kappa_m, kappa_f) innovations

    def validate(self) -> None:
        if len(self.regions) == 0 or len(self.genders) == 0 or len(self.age_lows) == 0:
            raise InvalidSpec("regions, genders and age bands must be non-empty")
        if any(a not in AGE_LOWS for a in self.age_lows):
            raise InvalidSpec(f"age bands must come from {AGE_LOWS}")
        if self.n_months < 24:
            raise InvalidSpec("need at least 24 months")
        if not self.exposure > 0:
            raise InvalidSpec("exposure must be positive")
        if not (-1.0 < self.innovation_corr < 1.0):
            raise InvalidSpec("innovation correlation must lie in (-1, 1)")
        if not (-1.0 < self.aci_ar < 1.0):
            raise InvalidSpec("ACI autoregression must lie in (-1, 1)")
        if self.kappa_sigma < 0 or self.aci_sigma < 0:
            raise InvalidSpec("noise scales must be non-negative")


@dataclass
class SyntheticTruth:
    """Ground truth record accompanying a generated panel."""

    spec: SyntheticSpec
    alpha: dict          # (region, gender) -> array over ages
    beta: dict           # (region, gender) -> array over ages
    kappa: dict          # (region, gender) -> array over months
    aci: dict            # (region, component) -> array over months
    log_mu_baseline: dict  # (region, gender) -> (ages, months) array
    log_mu: dict           # (region, gender) -> (ages, months), incl. excess
    field_names: tuple = ("alpha", "beta", "kappa", "aci",
                          "log_mu_baseline", "log_mu")


def generate_synthetic(spec: SyntheticSpec) -> tuple[
        list[MortalityCell], PanelIndex, dict[tuple[str, str], AciPanel], SyntheticTruth]:
    """Draw a complete synthetic mortality + climate panel.

    Deterministic under the spec's seed: identical specs produce bitwise
    identical panels.
    """
    spec.validate()
    months = np.arange(spec.n_months)
    ages = np.asarray(spec.age_lows, dtype=float)
    band = (ages - ages[0]) / 5.0

    alpha_true = spec.alpha_top + spec.alpha_slope * band
    beta_raw = spec.beta_top + spec.beta_slope * band
    beta_true = beta_raw / beta_raw.sum()
    beta_scale = beta_raw.sum()

    season = np.sin(2.0 * np.pi * months / 12.0)
    corr = spec.innovation_corr

    truth_alpha, truth_beta, truth_kappa = {}, {}, {}
    truth_aci, truth_logmu_base, truth_logmu = {}, {}, {}
    aci_panels: dict[tuple[str, str], AciPanel] = {}
    cells: list[MortalityCell] = []

    for r_i, region in enumerate(spec.regions):
        rng = SeededStream(spec.seed, stream=r_i + 1).generator()

        # shared innovations: male kappa, female kappa, T90, T10
        z = rng.standard_normal((spec.n_months, 4))
        eps_km = z[:, 0]
        eps_kf = corr * z[:, 0] + np.sqrt(1.0 - corr ** 2) * z[:, 1]
        eps_t90 = z[:, 2]
        eps_t10 = -0.5 * z[:, 2] + np.sqrt(1.0 - 0.25) * z[:, 3]

        aci_series: dict[str, np.ndarray] = {}
        for comp, eps, phase in (("T90", eps_t90, 6.0), ("T10", eps_t10, 0.0)):
            base = spec.aci_season_amp * np.sin(2.0 * np.pi * (months - phase) / 12.0)
            noise = np.zeros(spec.n_months)
            for t in range(spec.n_months):
                prev = noise[t - 1] if t > 0 else 0.0
                noise[t] = spec.aci_ar * prev + spec.aci_sigma * eps[t]
            aci_series[comp] = base + noise
        for comp in ("P", "D", "W"):
            eps = rng.standard_normal(spec.n_months)
            base = 0.3 * np.sin(2.0 * np.pi * (months - 3.0) / 12.0)
            noise = np.zeros(spec.n_months)
            for t in range(spec.n_months):
                prev = noise[t - 1] if t > 0 else 0.0
                noise[t] = spec.aci_ar * prev + spec.aci_sigma * eps[t]
            aci_series[comp] = base + noise

        for comp in ACI_COMPONENTS:
            truth_aci[(region, comp)] = aci_series[comp]
            aci_panels[(region, comp)] = AciPanel(region, comp, aci_series[comp])

        excess = (spec.excess_t90 * aci_series["T90"]
                  + spec.excess_t10 * aci_series["T10"])

        for g_i, gender in enumerate(spec.genders):
            eps_k = eps_km if gender == "male" else eps_kf
            kappa = np.zeros(spec.n_months)
            level_shift = 0.3 * g_i
            kappa[:12] = spec.kappa_season_amp * beta_scale * season[:12] + level_shift
            for t in range(12, spec.n_months):
                kappa[t] = (kappa[t - 12] + 12.0 * spec.kappa_drift
                            + spec.kappa_sigma * eps_k[t])

            log_mu_base = alpha_true[:, None] + beta_true[:, None] * kappa[None, :]
            log_mu = log_mu_base + excess[None, :]

            key = (region, gender)
            truth_alpha[key] = alpha_true.copy()
            truth_beta[key] = beta_true.copy()
            truth_kappa[key] = kappa
            truth_logmu_base[key] = log_mu_base
            truth_logmu[key] = log_mu

            mean_deaths = spec.exposure * np.exp(log_mu)
            deaths = rng.poisson(mean_deaths)
            for a_i, age_low in enumerate(spec.age_lows):
                for t in range(spec.n_months):
                    cells.append(MortalityCell(region, gender, age_low, t,
                                               int(deaths[a_i, t]), spec.exposure))

    index = _build_index(cells)
    order = {key: pos for pos, key in enumerate(index.keys())}
    cells.sort(key=lambda c: order[c.key()])
    truth = SyntheticTruth(spec, truth_alpha, truth_beta, truth_kappa,
                           truth_aci, truth_logmu_base, truth_logmu)
    return cells, index, aci_panels, truth
