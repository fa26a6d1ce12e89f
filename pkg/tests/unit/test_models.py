"""Unit tests for domain, result and C^n models."""

import pytest
from pydantic import ValidationError

from conformal_rigidity.models.cn import Ball, CnBoundsRecord, Polydisk, cn_adapter
from conformal_rigidity.models.domain import (
    Annulus,
    Disk,
    MultiplyConnected,
    Polygon,
    Punctured,
    SmoothJordan,
    base_of,
    domain_adapter,
    hole_count,
    punctures_of,
    spec_key,
)
from conformal_rigidity.models.results import (
    CHAIN_ORDER,
    CapacityBracket,
    ChainEntry,
    Conclusion,
    ConsistencyRecord,
    ProbeReport,
    SublevelRecord,
    SublevelSweep,
    TheoremId,
)


class TestDomainModels:
    """Tests for planar domain specifications."""

    def test_disk_requires_positive_radius(self) -> None:
        """Test radius validation."""
        with pytest.raises(ValidationError):
            Disk(radius=0.0)

    def test_annulus_radius_order(self) -> None:
        """Test that the inner radius must be smaller."""
        with pytest.raises(ValidationError):
            Annulus(r_inner=1.0, r_outer=0.5)

    def test_clockwise_polygon_rejected(self) -> None:
        """Test orientation validation."""
        with pytest.raises(ValidationError):
            Polygon(vertices=(0j, 1j, 1 + 1j, 1 + 0j))

    def test_negatively_oriented_curve_rejected(self) -> None:
        """Test that a clockwise Fourier curve is rejected."""
        with pytest.raises(ValidationError):
            SmoothJordan(coefficients=((-1, 1.0),))

    def test_repeated_wavenumber_rejected(self) -> None:
        """Test that wavenumbers must be distinct."""
        with pytest.raises(ValidationError):
            SmoothJordan(coefficients=((1, 1.0), (1, 0.2)))

    def test_complex_pairs(self) -> None:
        """Test that [re, im] pairs parse into complex numbers."""
        disk = Disk.model_validate({"center": [0.5, -0.25], "radius": 2})
        assert disk.center == complex(0.5, -0.25)

    def test_json_round_trip(self, holed_disk: MultiplyConnected) -> None:
        """Test that a spec re-parses into an equal object."""
        spec = Punctured(base=holed_disk, punctures=(-0.5 + 0j,))
        restored = domain_adapter.validate_json(domain_adapter.dump_json(spec))
        assert restored == spec
        assert spec_key(restored) == spec_key(spec)

    def test_specs_are_hashable(self, unit_disk: Disk) -> None:
        """Test that specs can serve as cache keys."""
        assert {unit_disk: 1}[Disk(radius=1.0)] == 1

    def test_hole_count(
        self, unit_disk: Disk, annulus: Annulus, holed_disk: MultiplyConnected
    ) -> None:
        """Test hole counting; punctures are not holes."""
        assert hole_count(unit_disk) == 0
        assert hole_count(annulus) == 1
        assert hole_count(holed_disk) == 1
        assert hole_count(Punctured(base=unit_disk, punctures=(0.5 + 0j,))) == 0

    def test_punctures(self, unit_disk: Disk) -> None:
        """Test puncture accessors."""
        spec = Punctured(base=unit_disk, punctures=(0.5 + 0j,))
        assert base_of(spec) == unit_disk
        assert punctures_of(spec) == (0.5 + 0j,)
        assert punctures_of(unit_disk) == ()


class TestCnModels:
    """Tests for ball and polydisk specifications."""

    def test_ball_center_dimension(self) -> None:
        """Test that the center must have n coordinates."""
        with pytest.raises(ValidationError):
            Ball(n=2, radius=1.0, center=(0j,))

    def test_polydisk_radii_positive(self) -> None:
        """Test radius validation."""
        with pytest.raises(ValidationError):
            Polydisk(radii=(1.0, -1.0))

    def test_discriminated_union(self) -> None:
        """Test parsing through the adapter."""
        spec = cn_adapter.validate_python({"kind": "polydisk", "radii": [1.0, 2.0]})
        assert isinstance(spec, Polydisk)
        assert spec.n == 2

    def test_bounds_hold(self) -> None:
        """Test the bound predicate."""
        record = CnBoundsRecord(
            domain=Ball(n=1, radius=1.0),
            n=1,
            kernel=0.2,
            delta=1.0,
            bound_b=0.3,
            azukawa_volume=4.0,
            bound_a=3.0,
            kernel_equality=False,
            volume_equality=False,
        )
        assert record.bounds_hold
        assert not record.model_copy(update={"kernel": 0.4}).bounds_hold


class TestResultModels:
    """Tests for result model helpers."""

    def test_chain_order(self) -> None:
        """Test that entries are listed from largest to smallest."""
        assert CHAIN_ORDER[0] == ChainEntry.INV_DELTA_SQ
        assert CHAIN_ORDER[-1] == ChainEntry.ISOPER
        assert len(CHAIN_ORDER) == 7

    def test_bracket_ordering(self) -> None:
        """Test the capacity bracket predicate with slack."""
        bracket = CapacityBracket(lower=0.9, central=1.0, upper=1.1, szego_volume_gap=0.0)
        assert bracket.is_ordered(1e-6)
        swapped = bracket.model_copy(update={"central": 1.1 + 1e-9})
        assert swapped.is_ordered(1e-6)
        assert not bracket.model_copy(update={"central": 1.2}).is_ordered(1e-6)

    def test_sweep_spread(self) -> None:
        """Test the relative spread of a sweep."""
        records = [
            SublevelRecord(t=-2.0, volume=1.0, f=2.0),
            SublevelRecord(t=-1.0, volume=1.0, f=1.5),
        ]
        sweep = SublevelSweep(
            pole=0j,
            records=records,
            monotone=True,
            limit_zero_raw=1.5,
            limit_zero=1.5,
            limit_inf=2.0,
            target_zero=1.0,
            target_inf=2.0,
            limit_zero_ok=False,
            limit_inf_ok=True,
        )
        assert sweep.spread == pytest.approx(0.25)

    def test_probe_vacuous(self) -> None:
        """Test that a probe without verdicts is consistent."""
        assert ProbeReport(records=[]).consistent

    def test_probe_disagreement(self) -> None:
        """Test that one disagreeing record makes the probe inconsistent."""
        record = ConsistencyRecord(
            theorem=TheoremId.SUITA,
            conclusion=Conclusion.SIMPLY_CONNECTED,
            agrees=False,
            measure=1.0,
            detail="1 hole(s)",
        )
        assert not ProbeReport(records=[record]).consistent
