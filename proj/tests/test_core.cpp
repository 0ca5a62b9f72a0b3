#include <catch2/catch_amalgamated.hpp>

#include "quditlab/quditlab.hpp"
#include "test_helpers.hpp"

using namespace quditlab;

TEST_CASE("flip matrix on one qutrit", "[core]") {
    Matrix u = gate_unitary(flip(0, 0, 1), SiteDims::uniform(1, 3));
    Matrix want(3);
    want(0, 1) = 1;
    want(1, 0) = 1;
    want(2, 2) = 1;
    REQUIRE(u.max_abs_diff(want) == 0.0);
}

TEST_CASE("controlled flip matrix on two qutrits", "[core]") {
    // control at |1> on site 0, (0,1) flip on site 1: a 9x9 permutation
    // swapping |10> and |11> only
    Matrix u = gate_unitary(controlled({{0, 1}}, flip(1, 0, 1)), SiteDims::uniform(2, 3));
    Matrix want = Matrix::identity(9);
    want(3, 3) = 0;
    want(4, 4) = 0;
    want(3, 4) = 1;
    want(4, 3) = 1;
    REQUIRE(u.max_abs_diff(want) == 0.0);
}

TEST_CASE("cyclic shift wraps the top level", "[core]") {
    SiteDims d = SiteDims::uniform(1, 3);
    auto out = apply_gate(StateVector::basis_state(d, BasisString::parse("2")), shift(0, +1));
    REQUIRE(out.amplitude(BasisString::parse("0")) == cplx(1.0, 0.0));
}

TEST_CASE("every gate kind is unitary at small dimension", "[core]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        int sites = 1 + static_cast<int>(rng() % 3);
        std::vector<int> dims;
        for (int i = 0; i < sites; ++i) dims.push_back(2 + static_cast<int>(rng() % 3));
        SiteDims sd{dims};
        GateSpec g = test_helpers::random_gate(sd, rng, /*classical_only=*/false);
        REQUIRE(gate_unitary(g, sd).unitarity_defect() < 1e-12);
    }
    // up to the 729-dimensional six-qutrit register
    SiteDims six = SiteDims::uniform(6, 3);
    for (int trial = 0; trial < 40; ++trial) {
        GateSpec g = test_helpers::random_gate(six, rng, false);
        REQUIRE(gate_unitary(g, six).unitarity_defect() < 1e-12);
    }
}

TEST_CASE("phase and flip identities on one qutrit", "[core]") {
    SiteDims d = SiteDims::uniform(1, 3);
    Matrix z0 = gate_unitary(phase(0, 0), d);
    Matrix z1 = gate_unitary(phase(0, 1), d);
    Matrix z2 = gate_unitary(phase(0, 2), d);
    REQUIRE(z1.max_abs_diff((z0 * z2).scaled(cplx(-1.0, 0.0))) < 1e-15);

    Matrix x01 = gate_unitary(flip(0, 0, 1), d);
    Matrix x12 = gate_unitary(flip(0, 1, 2), d);
    Matrix x02 = gate_unitary(flip(0, 0, 2), d);
    REQUIRE(x02.max_abs_diff(x01 * x12 * x01) < 1e-15);
}

TEST_CASE("subspace swap moves the charge", "[core]") {
    SiteDims d = SiteDims::uniform(2, 3);
    GateSpec sw = swap_gate(0, 0, 2, 1, 0, 1);

    auto out = apply_gate(StateVector::basis_state(d, BasisString::parse("01")), sw);
    REQUIRE(out.amplitude(BasisString::parse("20")) == cplx(1.0, 0.0));

    out = apply_gate(StateVector::basis_state(d, BasisString::parse("11")), sw);
    REQUIRE(out.amplitude(BasisString::parse("11")) == cplx(1.0, 0.0));
}

TEST_CASE("controlled flip creates the expected superposition", "[core]") {
    // (|0>+|1>)|1>/sqrt2 -> (|01>+|12>)/sqrt2 under control(0@1) flip(1,2)
    SiteDims d = SiteDims::uniform(2, 3);
    StateVector in = StateVector::uniform_plus(d, {0});
    std::map<BasisString, cplx> amps;
    for (const auto& [b, a] : in.amplitudes) {
        BasisString bb = b;
        bb[1] = 1;
        amps[bb] = a;
    }
    in.amplitudes = std::move(amps);

    StateVector out = apply_gate(in, controlled({{0, 1}}, flip(1, 1, 2)));
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(out.amplitude(BasisString::parse("01")) - cplx(r)) < 1e-12);
    REQUIRE(std::abs(out.amplitude(BasisString::parse("12")) - cplx(r)) < 1e-12);
    REQUIRE(out.support_size() == 2);
}

TEST_CASE("sparse apply equals dense apply on random pairs", "[core]") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        int sites = 1 + static_cast<int>(rng() % 6);
        SiteDims sd = SiteDims::uniform(sites, 3);
        StateVector psi = test_helpers::random_state(sd, rng, /*support=*/6);
        GateSpec g = test_helpers::random_gate(sd, rng, false);

        StateVector sparse = apply_gate(psi, g);
        Matrix u = gate_unitary(g, sd);
        auto dense = u * to_dense(psi);

        double diff = 0.0;
        for (long idx = 0; idx < static_cast<long>(dense.size()); ++idx) {
            BasisString b = BasisString::from_index(idx, sd);
            diff = std::max(diff, std::abs(dense[static_cast<size_t>(idx)] - sparse.amplitude(b)));
        }
        REQUIRE(diff < 1e-12);
    }
}

TEST_CASE("classify_classical on encoder, Hadamard, and empty circuits", "[core]") {
    auto enc = build_encoder(Topology::TypeBLinear, 4);
    auto perm = classify_classical(enc.circuit);
    REQUIRE(perm.has_value());
    // all 81 basis images must match dense simulation
    Matrix u = circuit_unitary(enc.circuit);
    double diff = 0.0;
    for (long col = 0; col < 81; ++col) {
        BasisString in = BasisString::from_index(col, enc.circuit.dims);
        long img = perm->image(in).index(enc.circuit.dims);
        for (long r = 0; r < 81; ++r) {
            cplx want = (r == img) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            diff = std::max(diff, std::abs(u(r, col) - want));
        }
    }
    REQUIRE(diff < 1e-14);

    Circuit with_h(SiteDims::uniform(1, 3), {hadamard(0, 0, 1)});
    REQUIRE_FALSE(classify_classical(with_h).has_value());

    Circuit with_z(SiteDims::uniform(1, 3), {phase(0, 1)});
    REQUIRE_FALSE(classify_classical(with_z).has_value());

    Circuit empty(SiteDims::uniform(2, 3), {});
    auto id = classify_classical(empty);
    REQUIRE(id.has_value());
    BasisString b = BasisString::parse("12");
    REQUIRE(id->image(b) == b);
}

TEST_CASE("gate validation rejects bad levels and overlapping sites", "[core]") {
    SiteDims d = SiteDims::uniform(2, 3);
    REQUIRE_THROWS_AS(validate_gate(flip(0, 0, 3), d), validation_error);
    REQUIRE_THROWS_AS(validate_gate(flip(2, 0, 1), d), validation_error);
    REQUIRE_THROWS_AS(validate_gate(controlled({{0, 1}}, flip(0, 1, 2)), d), validation_error);
    REQUIRE_THROWS_AS(validate_gate(swap_gate(0, 0, 2, 0, 0, 1), d), validation_error);
}

TEST_CASE("dense unitary respects the capacity cap", "[core]") {
    SiteDims big = SiteDims::uniform(11, 3); // 3^11 > default cap 3^10
    REQUIRE_THROWS_AS(gate_unitary(flip(0, 0, 1), big), capacity_error);
}

TEST_CASE("QUDITLAB_MAX_DIM overrides the caps", "[core]") {
    REQUIRE(caps::dense_unitary() == 59049L);
    ::setenv("QUDITLAB_MAX_DIM", "123", 1);
    REQUIRE(caps::dense_unitary() == 123L);
    REQUIRE(caps::density() == 123L);
    SiteDims five = SiteDims::uniform(5, 3); // 243 > 123 now
    REQUIRE_THROWS_AS(gate_unitary(flip(0, 0, 1), five), capacity_error);
    ::unsetenv("QUDITLAB_MAX_DIM");
    REQUIRE(caps::dense_unitary() == 59049L);
}

TEST_CASE("circuit json round trip preserves behaviour", "[core]") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        int sites = 2 + static_cast<int>(rng() % 3);
        SiteDims sd = SiteDims::uniform(sites, 3);
        std::vector<GateSpec> gates;
        for (int i = 0; i < 5; ++i) gates.push_back(test_helpers::random_gate(sd, rng, false));
        Circuit c(sd, gates);

        Circuit back = circuit_from_json(json::parse(circuit_to_json(c).dump()));
        REQUIRE(back.dims == c.dims);
        REQUIRE(back.gate_count() == c.gate_count());
        Matrix u1 = circuit_unitary(c);
        Matrix u2 = circuit_unitary(back);
        REQUIRE(u1.max_abs_diff(u2) < 1e-14);
    }
}

TEST_CASE("state json round trip", "[core]") {
    std::mt19937_64 rng(9);
    SiteDims sd = SiteDims::uniform(3, 3);
    StateVector s = test_helpers::random_state(sd, rng, 8);
    StateVector back = state_from_json(json::parse(state_to_json(s).dump()));
    REQUIRE(back.support_size() == s.support_size());
    for (const auto& [b, a] : s.amplitudes) REQUIRE(std::abs(back.amplitude(b) - a) < 1e-15);
}

TEST_CASE("normalized construction enforces unit norm and pruning", "[core]") {
    SiteDims d = SiteDims::uniform(2, 3);
    std::map<BasisString, cplx> amps;
    amps[BasisString::parse("00")] = cplx(3.0, 0.0);
    amps[BasisString::parse("11")] = cplx(4.0, 0.0);
    amps[BasisString::parse("22")] = cplx(1e-17, 0.0);
    StateVector s = StateVector::normalized(d, amps);
    REQUIRE(std::abs(s.norm_sq() - 1.0) < 1e-12);
    REQUIRE(s.support_size() == 2);
    REQUIRE(std::abs(std::abs(s.amplitude(BasisString::parse("11"))) - 0.8) < 1e-12);
}
