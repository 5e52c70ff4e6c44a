import math

import numpy as np
import pytest

from conftest import random_blade, random_rotor

from subspace_angles.blades import Blade, blade_from_spanning_vectors
from subspace_angles.engine import (
    _classify_grades,
    bivector_split,
    cos_total,
    product_spectrum,
    relative_angle,
    rotor_reconstruction,
)
from subspace_angles.errors import (
    AmbiguousRankError,
    GradeMismatchError,
    NonEuclideanError,
    NotABladeError,
)
from subspace_angles.ga import Multivector, Signature, basis_vectors
from subspace_angles.oracle import orthonormal_basis, principal_angles
from subspace_angles.sampling import sample_spans

SIG3 = Signature(3)
E1, E2, E3 = basis_vectors(SIG3)
SQ2 = math.sqrt(0.5)


def blade_of(mv):
    return Blade.from_multivector(mv)


class TestCosTotal:
    def test_lines_at_45_degrees(self):
        a = blade_of(E1)
        b = blade_of((E1 + E2) * SQ2)
        assert cos_total(a, b) == pytest.approx(SQ2, abs=1e-12)

    def test_identity(self):
        a = blade_of(E1 ^ E2)
        assert cos_total(a, a) == pytest.approx(1.0, abs=1e-12)

    def test_perpendicular_planes_sharing_a_line(self):
        assert cos_total(blade_of(E1 ^ E2), blade_of(E1 ^ E3)) == pytest.approx(0.0, abs=1e-15)

    def test_grade_mismatch(self):
        with pytest.raises(GradeMismatchError):
            cos_total(blade_of(E1), blade_of(E1 ^ E2))

    def test_bounded_by_one(self):
        rng = np.random.default_rng(30)
        for _ in range(50):
            n = int(rng.integers(2, 9))
            sig = Signature(n)
            r = int(rng.integers(1, min(4, n) + 1))
            a = random_blade(rng, sig, r)
            b = random_blade(rng, sig, r)
            assert abs(cos_total(a, b)) <= 1.0 + 1e-12


class TestProductSpectrum:
    def test_identical_planes_scalar_only(self):
        spec = product_spectrum(blade_of(E1 ^ E2), blade_of(E1 ^ E2))
        assert list(spec.norms) == [0]
        assert spec.norms[0] == pytest.approx(1.0)

    def test_disjoint_planes_top_grade_only(self):
        sig = Signature(4)
        e = basis_vectors(sig)
        spec = product_spectrum(blade_of(e[0] ^ e[1]), blade_of(e[2] ^ e[3]))
        assert list(spec.norms) == [4]

    def test_mixed_grades_odd(self):
        spec = product_spectrum(blade_of((E1 ^ E2) ^ E3), blade_of(E1 ^ E2))
        assert all(k % 2 == 1 for k in spec.norms)

    def test_grade_limit_and_parity_random(self):
        rng = np.random.default_rng(31)
        for _ in range(60):
            n = int(rng.integers(2, 9))
            sig = Signature(n)
            rb = int(rng.integers(1, min(4, n) + 1))
            q = int(rng.integers(0, min(2, n - rb) + 1))
            a = random_blade(rng, sig, rb + q)
            b = random_blade(rng, sig, rb)
            spec = product_spectrum(a, b)
            top_limit = 2 * min(rb, n // 2) + q
            for k in spec.norms:
                assert k % 2 == q % 2
                assert q <= k <= top_limit

    def test_parts_sum_to_product(self):
        rng = np.random.default_rng(32)
        sig = Signature(5)
        a = random_blade(rng, sig, 2)
        b = random_blade(rng, sig, 2)
        m = a.mv * b.mv.reverse()
        total = Multivector.zero(sig)
        for part in product_spectrum(a, b).parts.values():
            total = total + part
        assert total == m


class TestBivectorSplit:
    def test_single_plane(self):
        parts = bivector_split((E1 ^ E2) * 2.0)
        assert len(parts) == 1
        beta, plane = parts[0]
        assert beta == pytest.approx(2.0, abs=1e-12)
        assert plane.approx_eq(E1 ^ E2, 1e-12)

    def test_two_distinct_planes(self):
        sig = Signature(4)
        e = basis_vectors(sig)
        f = (e[0] ^ e[1]) * 3.0 + (e[2] ^ e[3])
        parts = bivector_split(f)
        assert len(parts) == 2
        assert parts[0][0] == pytest.approx(3.0, abs=1e-9)
        assert parts[1][0] == pytest.approx(1.0, abs=1e-9)
        assert parts[0][1].approx_eq(e[0] ^ e[1], 1e-9)
        assert parts[1][1].approx_eq(e[2] ^ e[3], 1e-9)

    def test_equal_coefficients_contract_only(self):
        sig = Signature(4)
        e = basis_vectors(sig)
        f = (e[0] ^ e[1]) + (e[2] ^ e[3])
        parts = bivector_split(f)
        assert len(parts) == 2
        self._check_contract(f, parts)

    def test_non_bivector_rejected(self):
        with pytest.raises(NotABladeError):
            bivector_split(E1)

    def test_zero_bivector(self):
        assert bivector_split(Multivector.zero(SIG3)) == []

    @staticmethod
    def _check_contract(f, parts):
        sig = f.sig
        rebuilt = Multivector.zero(sig)
        for beta, plane in parts:
            assert beta > 0
            # simple unit bivector: square is -1
            sq = plane * plane
            assert sq.grades(tol=1e-9 * max(1.0, plane.coeff_norm() ** 2)) == [0]
            assert sq.scalar_part() == pytest.approx(-1.0, abs=1e-9)
            rebuilt = rebuilt + plane * beta
        scale = max(1.0, f.coeff_norm())
        assert (rebuilt - f).coeff_norm() <= 1e-9 * scale
        for i, (_, pi) in enumerate(parts):
            for _, pj in parts[i + 1:]:
                assert pi.left_contraction(pj).coeff_norm() <= 1e-9
                assert (pi * pj - pj * pi).coeff_norm() <= 1e-9

    def test_random_bivectors(self):
        rng = np.random.default_rng(33)
        for _ in range(60):
            n = int(rng.integers(2, 9))
            sig = Signature(n)
            coeffs = np.zeros(sig.size)
            for i in range(n):
                for j in range(i + 1, n):
                    coeffs[(1 << i) | (1 << j)] = rng.uniform(-1, 1)
            f = Multivector(sig, coeffs)
            parts = bivector_split(f)
            self._check_contract(f, parts)
            betas = [b for b, _ in parts]
            assert betas == sorted(betas, reverse=True)

    def test_wide_dynamic_range(self):
        sig = Signature(4)
        e = basis_vectors(sig)
        f = (e[0] ^ e[1]) * 1e4 + (e[2] ^ e[3]) * 1e-3
        parts = bivector_split(f)
        assert len(parts) == 2
        assert parts[0][0] == pytest.approx(1e4, rel=1e-10)
        assert parts[1][0] == pytest.approx(1e-3, rel=1e-8)


class TestRelativeAngle:
    def test_identical_blades(self):
        rng = np.random.default_rng(34)
        for _ in range(10):
            n = int(rng.integers(2, 8))
            sig = Signature(n)
            r = int(rng.integers(1, min(4, n) + 1))
            a = random_blade(rng, sig, r)
            rep = relative_angle(a, a)
            assert rep.s == r and rep.t == 0
            assert all(abs(th) <= 1e-7 for th in rep.angles)
            assert rep.cos_total == pytest.approx(1.0, abs=1e-10)

    def test_paper_3d_perpendicular_planes(self):
        rep = relative_angle(blade_of(E1 ^ E2), blade_of(E1 ^ E3))
        assert rep.s == 1
        assert rep.t == 1
        assert rep.cos_total == 0.0
        assert rep.angles[0] == pytest.approx(math.pi / 2, abs=1e-12)
        assert rep.angles[1] == pytest.approx(0.0, abs=1e-12)

    def test_rotated_plane(self):
        alpha = 0.3
        b = blade_from_spanning_vectors([[math.cos(alpha), 0, math.sin(alpha)], [0, 1, 0]])
        rep = relative_angle(blade_of(E1 ^ E2), b)
        assert rep.s == 1 and rep.t == 0
        assert rep.angles[0] == pytest.approx(alpha, abs=1e-12)
        assert rep.angles[1] == pytest.approx(0.0, abs=1e-12)
        assert rep.cos_total == pytest.approx(math.cos(alpha), abs=1e-12)
        # the single principal plane lies in span{e1, e3}
        assert len(rep.planes) == 1
        plane = rep.planes[0]
        assert E2.left_contraction(plane).coeff_norm() <= 1e-9
        assert (plane * plane).scalar_part() == pytest.approx(-1.0, abs=1e-9)

    def test_mixed_dimension(self):
        rep = relative_angle(blade_of((E1 ^ E2) ^ E3), blade_of(E1 ^ E2))
        assert rep.s == 2 and rep.t == 0
        assert rep.lowest_grade == 1
        assert rep.cos_total == pytest.approx(1.0, abs=1e-12)

    def test_swap_symmetry(self):
        rng = np.random.default_rng(35)
        for _ in range(20):
            a_rows, b_rows, _ = sample_spans(rng)
            a = blade_from_spanning_vectors(a_rows)
            b = blade_from_spanning_vectors(b_rows)
            r1 = relative_angle(a, b)
            r2 = relative_angle(b, a)
            assert r1.s == r2.s and r1.t == r2.t
            assert np.allclose(r1.angles, r2.angles, atol=1e-12)

    def test_scaling_invariance(self):
        rng = np.random.default_rng(36)
        sig = Signature(5)
        a = random_blade(rng, sig, 2)
        b = random_blade(rng, sig, 3)
        r1 = relative_angle(a, b)
        a2 = Blade.from_multivector(a.mv * 7.5)
        b2 = Blade.from_multivector(b.mv * 0.03)
        r2 = relative_angle(a2, b2)
        assert r1.s == r2.s and r1.t == r2.t
        assert np.allclose(r1.angles, r2.angles, atol=1e-10)
        assert r1.cos_total == pytest.approx(r2.cos_total, abs=1e-10)

    def test_rotor_conjugation_invariance(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            n = int(rng.integers(3, 7))
            sig = Signature(n)
            ra = int(rng.integers(1, min(3, n) + 1))
            rb = int(rng.integers(1, ra + 1))
            a = random_blade(rng, sig, ra)
            b = random_blade(rng, sig, rb)
            rot = random_rotor(rng, sig)
            a2 = Blade.from_multivector(rot * a.mv * rot.reverse())
            b2 = Blade.from_multivector(rot * b.mv * rot.reverse())
            r1 = relative_angle(a, b)
            r2 = relative_angle(a2, b2)
            assert r1.s == r2.s and r1.t == r2.t
            assert np.allclose(r1.angles, r2.angles, atol=1e-8)

    def test_grade_parity_exact_support(self):
        rng = np.random.default_rng(38)
        for _ in range(30):
            a_rows, b_rows, meta = sample_spans(rng)
            a = blade_from_spanning_vectors(a_rows)
            b = blade_from_spanning_vectors(b_rows)
            m = a.mv * b.mv.reverse()
            parity = (a.grade + b.grade) % 2
            for mask in m.support():
                assert int(mask).bit_count() % 2 == parity

    def test_isoclinic_pair_flags_equal_angles(self):
        alpha = 0.6
        c, s = math.cos(alpha), math.sin(alpha)
        a = blade_from_spanning_vectors([[1, 0, 0, 0], [0, 1, 0, 0]])
        b = blade_from_spanning_vectors([[c, 0, s, 0], [0, c, 0, s]])
        rep = relative_angle(a, b)
        assert rep.s == 0 and rep.t == 0
        assert np.allclose(rep.angles, [alpha, alpha], atol=1e-9)
        assert rep.has_equal_angles
        rebuilt = rotor_reconstruction(rep, a.magnitude, b.magnitude)
        assert (rebuilt - a.mv * b.mv.reverse()).coeff_norm() <= 1e-9

    def test_grade_five_in_eleven_dimensions(self):
        rng = np.random.default_rng(43)
        rows = rng.uniform(-1, 1, (5, 11))
        rows_b = np.vstack([rows[:3], rng.uniform(-1, 1, (2, 11))])
        a = blade_from_spanning_vectors(rows)
        b = blade_from_spanning_vectors(rows_b)
        rep = relative_angle(a, b)
        assert rep.s == 3
        pairs = principal_angles(orthonormal_basis(rows), orthonormal_basis(rows_b))
        oracle = sorted((float(x) for x in pairs.angles), reverse=True)
        assert np.allclose(rep.angles, oracle, atol=1e-8)

    def test_non_euclidean_rejected(self):
        sig = Signature(2, 1)
        e = basis_vectors(sig)
        a = Blade(e[0] ^ e[1], 2, 1.0)
        with pytest.raises(NonEuclideanError):
            relative_angle(a, a)

    def test_oracle_agreement_small_corpus(self):
        rng = np.random.default_rng(39)
        for _ in range(200):
            a_rows, b_rows, _ = sample_spans(rng)
            a = blade_from_spanning_vectors(a_rows)
            b = blade_from_spanning_vectors(b_rows)
            rep = relative_angle(a, b)
            pairs = principal_angles(orthonormal_basis(a_rows), orthonormal_basis(b_rows))
            oracle = sorted((float(x) for x in pairs.angles), reverse=True)
            assert len(oracle) == len(rep.angles)
            for e_ang, o_ang in zip(rep.angles, oracle):
                assert abs(e_ang - o_ang) <= 1e-8
            assert rep.s == int(np.sum(pairs.cosines >= 1.0 - 1e-9))
            assert rep.t == int(np.sum(pairs.cosines <= 1e-9))

    def test_scalar_part_identity(self):
        rng = np.random.default_rng(40)
        for _ in range(60):
            a_rows, b_rows, _ = sample_spans(rng, q=0)
            a = blade_from_spanning_vectors(a_rows)
            b = blade_from_spanning_vectors(b_rows)
            pairs = principal_angles(orthonormal_basis(a_rows), orthonormal_basis(b_rows))
            assert abs(cos_total(a, b)) == pytest.approx(float(np.prod(pairs.cosines)), abs=1e-10)

    def test_top_grade_sine_product(self):
        rng = np.random.default_rng(41)
        for _ in range(60):
            a_rows, b_rows, _ = sample_spans(rng)
            a = blade_from_spanning_vectors(a_rows)
            b = blade_from_spanning_vectors(b_rows)
            rep = relative_angle(a, b)
            pairs = principal_angles(orthonormal_basis(a_rows), orthonormal_basis(b_rows))
            sines = [math.sin(float(th)) for th, c in zip(pairs.angles, pairs.cosines)
                     if c < 1.0 - 1e-9]
            assert rep.sin_interior_product == pytest.approx(float(np.prod(sines)) if sines else 1.0,
                                                             abs=1e-9)


class TestClassifier:
    def test_clean_classification(self):
        assert _classify_grades({0: 1e-14, 2: 0.5, 4: 1.0}, 1e-9) == [2, 4]

    def test_straddling_norms_raise(self):
        with pytest.raises(AmbiguousRankError):
            _classify_grades({0: 5e-10, 2: 3e-9, 4: 1.0}, 1e-9)

    def test_wide_separation_is_fine(self):
        assert _classify_grades({0: 1e-13, 2: 1e-2, 4: 1.0}, 1e-9) == [2, 4]


class TestRotorReconstruction:
    def test_identity_case(self):
        a = blade_of((E1 ^ E2) * 2.0)
        rep = relative_angle(a, a)
        rebuilt = rotor_reconstruction(rep, a.magnitude, a.magnitude)
        assert rebuilt.approx_eq(Multivector.scalar(SIG3, 4.0), 1e-10)

    def test_paper_case(self):
        a = blade_of(E1 ^ E2)
        b = blade_of(E1 ^ E3)
        rep = relative_angle(a, b)
        rebuilt = rotor_reconstruction(rep, 1.0, 1.0)
        assert rebuilt.approx_eq(a.mv * b.mv.reverse(), 1e-9)

    def test_random_pairs(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            a_rows, b_rows, _ = sample_spans(rng)
            a = blade_from_spanning_vectors(a_rows)
            b = blade_from_spanning_vectors(b_rows)
            rep = relative_angle(a, b)
            rebuilt = rotor_reconstruction(rep, a.magnitude, b.magnitude)
            target = a.mv * b.mv.reverse()
            assert (rebuilt - target).coeff_norm() <= 1e-9 * a.magnitude * b.magnitude
