import itertools
import json

import numpy as np
import pytest

from sptomo.oracle import brute_force_q
from sptomo.pauli import StabilizerProductGroup, StabilizerProductState, parse_pauli
from sptomo.states import (
    QuantumState,
    TableCapExceeded,
    apply_depolarizing,
    basis_probabilities,
    bell_diff_distribution,
    char_distribution,
    fidelity,
    ghz,
    make_sps,
    measure_sps_basis,
    measure_sps_counts,
    mix,
    purity,
    random_mixed,
    random_pure,
    random_sps,
    state_from_json,
    state_to_json,
)
from sptomo.statespec import StateSpecError, parse_state_spec, planted_state

from conftest import pauli_labels, pauli_matrix


def sps(axes, signs):
    return StabilizerProductState.from_strings(axes, signs)


def maximally_mixed(n):
    return QuantumState.mixed(np.eye(2**n) / 2**n)


def random_states(rng, count, max_n):
    out = []
    for i in range(count):
        n = 1 + i % max_n
        if i % 3 == 0:
            out.append(random_pure(n, rng))
        elif i % 3 == 1:
            out.append(random_mixed(n, rng))
        else:
            out.append(random_mixed(n, rng, rank=2))
    return out


class TestQuantumState:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            QuantumState.pure([1, 1])

    def test_rejects_bad_density(self):
        with pytest.raises(ValueError):
            QuantumState.mixed([[1, 0.5], [0, 0]])
        with pytest.raises(ValueError):
            QuantumState.mixed([[2, 0], [0, -1]])
        with pytest.raises(ValueError):
            QuantumState.mixed(np.eye(3) / 3)

    def test_immutable(self):
        with pytest.raises(ValueError):
            ghz(2).data[0] = 0

    def test_json_round_trip(self, rng):
        for rho in (random_pure(2, rng), random_mixed(2, rng)):
            back = state_from_json(state_to_json(rho))
            assert np.allclose(back.data, rho.data)
        assert json.loads(state_to_json(ghz(1)))[0] == pytest.approx([2**-0.5, 0.0])


class TestMakeSps:
    def test_zero(self):
        assert np.allclose(make_sps(sps("Z", "0")).data, [1, 0])

    def test_minus(self):
        assert np.allclose(make_sps(sps("X", "1")).data, np.array([1, -1]) / np.sqrt(2))

    @pytest.mark.parametrize("axis", "XYZ")
    @pytest.mark.parametrize("sign", [0, 1])
    def test_eigenstates(self, axis, sign):
        vec = make_sps(StabilizerProductState(StabilizerProductGroup(axis), sign)).data
        assert np.allclose(pauli_matrix(axis) @ vec, (-1) ** sign * vec)

    def test_worked_basis_is_orthonormal(self):
        group = StabilizerProductGroup("XYZYZ")
        basis = np.array([make_sps(StabilizerProductState(group, s)).data for s in range(32)])
        assert np.allclose(basis.conj() @ basis.T, np.eye(32))
        gen = pauli_matrix("XYZYZ")
        for s, vec in enumerate(basis):
            assert np.allclose(gen @ vec, (-1) ** bin(s).count("1") * vec)


class TestFidelity:
    def test_basis_state(self):
        rho = QuantumState.mixed([[1, 0], [0, 0]])
        assert fidelity(rho, sps("Z", "0")) == pytest.approx(1)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_ghz_half(self, n):
        assert fidelity(ghz(n), sps("Z" * n, "0" * n)) == pytest.approx(0.5)

    @pytest.mark.parametrize("n", [1, 3])
    def test_maximally_mixed(self, n, rng):
        assert fidelity(maximally_mixed(n), random_sps(n, rng)) == pytest.approx(2.0**-n)

    def test_pure_and_mixed_agree(self, rng):
        psi = random_pure(3, rng)
        phi = random_sps(3, rng)
        assert fidelity(psi, phi) == pytest.approx(fidelity(psi.as_mixed(), phi))

    def test_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(ghz(2), sps("Z", "0"))


class TestCharDistribution:
    def test_zero_state(self):
        p = char_distribution(make_sps(sps("Z", "0")))
        assert [p[parse_pauli(c)] for c in "IXYZ"] == pytest.approx([0.5, 0, 0, 0.5])

    def test_maximally_mixed_single_qubit(self):
        p = char_distribution(maximally_mixed(1))
        assert [p[parse_pauli(c)] for c in "IXYZ"] == pytest.approx([0.5, 0, 0, 0])
        assert p.total() == pytest.approx(purity(maximally_mixed(1)))

    def test_random_pure_sums_to_one(self, rng):
        assert char_distribution(random_pure(2, rng)).total() == pytest.approx(1, abs=1e-9)

    def test_matches_explicit_traces(self, rng):
        for rho in (random_pure(3, rng), random_mixed(3, rng)):
            p = char_distribution(rho)
            dens = rho.density()
            for lab in pauli_labels(3):
                expect = np.trace(pauli_matrix(lab) @ dens).real ** 2 / 8
                assert p[parse_pauli(lab)] == pytest.approx(expect, abs=1e-12)

    def test_cap(self):
        with pytest.raises(TableCapExceeded):
            char_distribution(ghz(3), cap=2)


class TestBellDiffDistribution:
    def test_stabilizer_support(self):
        q = bell_diff_distribution(make_sps(sps("Z", "0")))
        assert [q[parse_pauli(c)] for c in "IXYZ"] == pytest.approx([0.5, 0, 0, 0.5])

    def test_ghz2_support(self):
        q = bell_diff_distribution(ghz(2))
        support = {lab for lab in pauli_labels(2) if q[parse_pauli(lab)] > 1e-12}
        assert support == {"II", "XX", "YY", "ZZ"}
        assert q[parse_pauli("YY")] == pytest.approx(0.25)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_maximally_mixed_is_uniform(self, n):
        q = bell_diff_distribution(maximally_mixed(n))
        assert np.allclose(q.table, 4.0**-n, atol=1e-12)

    def test_forms_agree_on_pure(self, rng):
        for n in (1, 2, 3, 4):
            psi = random_pure(n, rng)
            a = bell_diff_distribution(psi, form="convolution").table
            b = bell_diff_distribution(psi, form="signed").table
            assert np.max(np.abs(a - b)) <= 1e-9

    def test_convolution_rejects_mixed(self, rng):
        with pytest.raises(ValueError):
            bell_diff_distribution(random_mixed(1, rng), form="convolution")

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matches_oracle(self, n, rng):
        for rho in (random_pure(n, rng), random_mixed(n, rng)):
            fast = bell_diff_distribution(rho).table
            assert np.max(np.abs(fast - brute_force_q(rho).table)) <= 1e-9

    @pytest.mark.parametrize("n", [1, 2])
    def test_matches_four_copy_projector(self, n, rng):
        # q(x) = tr(Pi_x rho^{x4}), Pi_x = 4^-n sum_a (-1)^[x,a] W_a^{x4}
        rho = random_mixed(n, rng)
        dens = rho.density()
        rho4 = np.kron(np.kron(dens, dens), np.kron(dens, dens))
        labels = pauli_labels(n)
        mats = {lab: pauli_matrix(lab) for lab in labels}
        quad = {lab: np.kron(np.kron(m, m), np.kron(m, m)) for lab, m in mats.items()}
        q = bell_diff_distribution(rho)
        for x in labels:
            proj = sum(
                (1 if np.allclose(mats[x] @ mats[a], mats[a] @ mats[x]) else -1) * quad[a]
                for a in labels
            ) / 4**n
            assert q[parse_pauli(x)] == pytest.approx(np.trace(proj @ rho4).real, abs=1e-12)

    def test_stabilizer_product_state_is_uniform_on_group(self, rng):
        for n in (1, 3, 5):
            phi = random_sps(n, rng)
            q = bell_diff_distribution(make_sps(phi))
            members = {e.index for e in phi.group.elements()}
            for idx, value in enumerate(q.table):
                assert value == pytest.approx(2.0**-n if idx in members else 0, abs=1e-12)


class TestIdentities:
    def test_purity_identity(self, rng):
        for rho in random_states(rng, 60, 4):
            assert abs(char_distribution(rho).total() - purity(rho)) <= 1e-9

    def test_q_bounds(self, rng):
        for rho in random_states(rng, 60, 4):
            q = bell_diff_distribution(rho)
            assert abs(q.total() - 1) <= 1e-9
            assert q.table.max() <= purity(rho) / 2**rho.n + 1e-12

    def test_tau4_mass(self, rng):
        for rho in random_states(rng, 30, 3):
            q = bell_diff_distribution(rho)
            for axes in itertools.product("XYZ", repeat=rho.n):
                group = StabilizerProductGroup("".join(axes))
                best = max(
                    fidelity(rho, StabilizerProductState(group, s)) for s in range(2**rho.n)
                )
                assert q.mass(group.elements()) >= best**4 - 1e-9


class TestMeasurement:
    def test_zero_state_all_z(self, rng):
        labels = measure_sps_basis(make_sps(sps("ZZZ", "000")), StabilizerProductGroup("ZZZ"), 200, rng)
        assert set(labels.tolist()) == {0}

    def test_signs_are_labels(self, rng):
        phi = random_sps(4, rng)
        probs = basis_probabilities(make_sps(phi), phi.group)
        assert probs[phi.signs] == pytest.approx(1)

    def test_ghz2(self, rng):
        labels = measure_sps_basis(ghz(2), StabilizerProductGroup("ZZ"), 20000, rng)
        assert set(labels.tolist()) == {0, 3}
        assert np.mean(labels == 0) == pytest.approx(0.5, abs=0.02)

    def test_plus_in_z(self, rng):
        counts = measure_sps_counts(make_sps(sps("X", "0")), StabilizerProductGroup("Z"), 20000, rng)
        assert counts / counts.sum() == pytest.approx([0.5, 0.5], abs=0.02)

    def test_probabilities_are_fidelities(self, rng):
        for rho in (random_pure(3, rng), random_mixed(3, rng)):
            group = StabilizerProductGroup("XYZ")
            probs = basis_probabilities(rho, group)
            expect = [fidelity(rho, StabilizerProductState(group, s)) for s in range(8)]
            assert probs == pytest.approx(expect, abs=1e-12)

    def test_empirical_convergence(self, rng):
        rho = random_mixed(3, rng)
        group = StabilizerProductGroup("YXZ")
        labels = measure_sps_basis(rho, group, 10**5, rng)
        freq = np.bincount(labels, minlength=8) / labels.size
        assert np.max(np.abs(freq - basis_probabilities(rho, group))) <= 0.02

    def test_errors(self, rng):
        with pytest.raises(ValueError):
            measure_sps_basis(ghz(2), StabilizerProductGroup("Z"), 10, rng)
        with pytest.raises(ValueError):
            measure_sps_basis(ghz(2), StabilizerProductGroup("ZZ"), 0, rng)


class TestChannels:
    def test_depolarizing_limits(self, rng):
        rho = random_mixed(2, rng)
        assert np.allclose(apply_depolarizing(rho, 0).data, rho.data)
        assert np.allclose(apply_depolarizing(rho, 1).data, np.eye(4) / 4)

    def test_depolarized_fidelity(self, rng):
        phi = random_sps(5, rng)
        rho = apply_depolarizing(make_sps(phi), 0.1)
        assert fidelity(rho, phi) == pytest.approx(0.9 + 0.1 / 32)

    def test_depolarizing_range(self):
        with pytest.raises(ValueError):
            apply_depolarizing(ghz(1), 1.5)

    def test_mix(self):
        rho = mix(make_sps(sps("Z", "0")), make_sps(sps("Z", "1")), 0.25)
        assert np.allclose(rho.data, np.diag([0.75, 0.25]))

    def test_generators(self, rng):
        assert np.allclose(ghz(2).data, np.array([1, 0, 0, 1]) / np.sqrt(2))
        for seed in range(20):
            phi = random_sps(4, np.random.default_rng(seed))
            assert phi.n == 4 and 0 <= phi.signs < 16
        assert random_pure(3, rng).n == 3


class TestStateSpec:
    def test_bases(self):
        assert np.allclose(parse_state_spec("ghz:3").data, ghz(3).data)
        rho = parse_state_spec("sps:XYZYZ:01001")
        assert fidelity(rho, sps("XYZYZ", "01001")) == pytest.approx(1)
        a = parse_state_spec("haar:3:42")
        assert np.allclose(a.data, parse_state_spec("haar:3:42").data)

    def test_modifiers(self):
        rho = parse_state_spec("sps:ZZ:00+depol:0.2+mix:0.5:sps:ZZ:11")
        assert np.allclose(np.diag(rho.data).real, [0.425, 0.025, 0.025, 0.525])

    def test_json_base(self, tmp_path, rng):
        path = tmp_path / "state.json"
        psi = random_pure(2, rng)
        path.write_text(state_to_json(psi))
        assert np.allclose(parse_state_spec(f"json:{path}").data, psi.data)

    @pytest.mark.parametrize(
        "bad",
        ["ghz", "ghz:x", "sps:XQ:00", "sps:XX:0", "haar:2", "foo:1", "ghz:2+depol:2", "ghz:2+blur:1",
         "ghz:2+mix:0.5:ghz:3"],
    )
    def test_errors(self, bad):
        with pytest.raises(StateSpecError):
            parse_state_spec(bad)

    def test_planted(self):
        assert planted_state("sps:XZ:01+depol:0.1") == sps("XZ", "01")
        assert planted_state("ghz:3") is None
