#include <catch2/catch_amalgamated.hpp>

#include "quditlab/quditlab.hpp"
#include "test_helpers.hpp"

using namespace quditlab;

namespace {

StateVector simulated_encoder_output(const AmplitudeProfile& p) {
    auto enc = build_encoder(Topology::TypeALinear, p.size());
    return run(profile_input(p), enc.circuit);
}

double state_diff(const StateVector& a, const StateVector& b) {
    double d = 0.0;
    for (const auto& [bs, amp] : a.amplitudes) d = std::max(d, std::abs(amp - b.amplitude(bs)));
    for (const auto& [bs, amp] : b.amplitudes) d = std::max(d, std::abs(amp - a.amplitude(bs)));
    return d;
}

} // namespace

TEST_CASE("closed final state at the deterministic corners", "[analysis]") {
    // all beta = 1 -> |1 2 2 ... 2>
    std::vector<std::pair<cplx, cplx>> amps(5, {cplx(0.0), cplx(1.0)});
    StateVector s = closed_final_state(AmplitudeProfile(amps));
    REQUIRE(s.support_size() == 1);
    REQUIRE(std::abs(s.amplitude(BasisString::parse("12222")) - cplx(1.0, 0.0)) < 1e-15);

    // all alpha = 1 -> |0 0 ... 0>
    std::vector<std::pair<cplx, cplx>> zeros(5, {cplx(1.0), cplx(0.0)});
    StateVector z = closed_final_state(AmplitudeProfile(zeros));
    REQUIRE(z.support_size() == 1);
    REQUIRE(std::abs(z.amplitude(BasisString::zeros(5)) - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("closed final state reproduces the uniform four-qutrit output", "[analysis]") {
    StateVector closed = closed_final_state(AmplitudeProfile::uniform(4));
    StateVector sim = simulated_encoder_output(AmplitudeProfile::uniform(4));
    REQUIRE(closed.support_size() == 16);
    REQUIRE(state_diff(closed, sim) < 1e-12);
    REQUIRE(std::abs(closed.amplitude(BasisString::parse("1222")) - cplx(0.25, 0.0)) < 1e-12);
}

TEST_CASE("closed final state equals simulation on random profiles", "[analysis]") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5); // up to 6 sites
        AmplitudeProfile p = test_helpers::random_profile(n, rng);
        REQUIRE(state_diff(closed_final_state(p), simulated_encoder_output(p)) < 1e-12);
    }
}

TEST_CASE("prefix products are monotone with P0 = 1", "[analysis]") {
    std::mt19937_64 rng(73);
    AmplitudeProfile p = test_helpers::random_profile(6, rng);
    PrefixProduct P(p);
    REQUIRE(P[0] == 1.0);
    for (int j = 0; j < 6; ++j) REQUIRE(P[j + 1] <= P[j] + 1e-15);
}

TEST_CASE("purity closed form against the numerical partial trace", "[analysis]") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        AmplitudeProfile p = test_helpers::random_profile(n, rng);
        StateVector closed = closed_final_state(p);
        for (int j = 0; j < n; ++j) {
            double pred = purity_prediction(j, p);
            double num = purity(reduced_state(closed, {j}));
            INFO("n=" << n << " j=" << j);
            REQUIRE(std::abs(pred - num) < 1e-10);
        }
    }
}

TEST_CASE("separable sites have unit purity", "[analysis]") {
    // alpha_j = 1 at a middle site
    std::vector<std::pair<cplx, cplx>> amps(4, {cplx(1.0 / std::sqrt(2.0)), cplx(1.0 / std::sqrt(2.0))});
    amps[2] = {cplx(1.0), cplx(0.0)};
    AmplitudeProfile p{amps};
    REQUIRE(purity_prediction(2, p) == Catch::Approx(1.0));
    REQUIRE(purity(reduced_state(closed_final_state(p), {2})) == Catch::Approx(1.0));
}

TEST_CASE("uniform impurity decays geometrically along the chain", "[analysis]") {
    // the exact ratios approach 1/2 from above (0.65, 0.56, 0.53, ...), so
    // the suppression is geometric with the prefix product but never dips
    // below one half at finite j
    AmplitudeProfile p = AmplitudeProfile::uniform(10);
    std::vector<double> impurity;
    for (int j = 0; j < 10; ++j) impurity.push_back(1.0 - purity_prediction(j, p));
    std::vector<double> ratios;
    for (int j = 1; j + 1 < 10; ++j)
        ratios.push_back(impurity[static_cast<size_t>(j) + 1] / impurity[static_cast<size_t>(j)]);
    for (size_t i = 0; i + 1 < ratios.size(); ++i) REQUIRE(ratios[i + 1] < ratios[i]);
    for (double r : ratios) {
        REQUIRE(r < 2.0 / 3.0);
        REQUIRE(r > 0.5);
    }
    REQUIRE(ratios.back() < 0.51);
    // absolute suppression: impurity is bounded by a constant times P_j
    for (int j = 1; j < 10; ++j)
        REQUIRE(impurity[static_cast<size_t>(j)] <= 2.0 * std::pow(0.5, j));
}

TEST_CASE("propagated forms equal the conjugated errors on qubit inputs", "[analysis]") {
    for (int n : {2, 3, 4}) {
        for (ErrorKind kind : {ErrorKind::Z0, ErrorKind::Z1, ErrorKind::Z2, ErrorKind::X01,
                               ErrorKind::X12, ErrorKind::X02}) {
            for (int k = 0; k < n; ++k) {
                PropagatedError p = propagate_error(kind, k, n);
                Matrix conj = conjugated_error(kind, k, n);
                INFO(error_kind_name(kind) << " k=" << k << " n=" << n);
                REQUIRE(qubit_subspace_column_diff(p.matrix, conj, n) < 1e-10);
            }
        }
    }
}

TEST_CASE("X02 propagation is the composite of its factors", "[analysis]") {
    for (int k = 0; k < 4; ++k) {
        PropagatedError x02 = propagate_error(ErrorKind::X02, k, 4);
        PropagatedError x01 = propagate_error(ErrorKind::X01, k, 4);
        PropagatedError x12 = propagate_error(ErrorKind::X12, k, 4);
        Matrix prod = x01.matrix * x12.matrix * x01.matrix;
        REQUIRE(x02.matrix.max_abs_diff(prod) < 1e-12);
    }
}

TEST_CASE("a phase on the all-ones branch flips the global sign", "[analysis]") {
    // Z2 injected mid-circuit acts as -1 on the all-ones input
    int n = 3;
    PropagatedError p = propagate_error(ErrorKind::Z2, 2, n);
    SiteDims d = SiteDims::uniform(n, 3);
    BasisString ones = BasisString::parse("111");
    long idx = ones.index(d);
    REQUIRE(std::abs(p.matrix(idx, idx) - cplx(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("dispersion baseline and locality", "[analysis]") {
    std::mt19937_64 rng(83);
    int n = 4;
    auto full = build_full_mct(Topology::TypeALinear, n, flip(0, 0, 1));
    AmplitudeProfile prof = test_helpers::random_profile(n, rng);
    int center = n; // after the central gate

    // identity-acting error: D = 1 at every site
    for (int i = 0; i < n; ++i) {
        ErrorInjection inj(center, phase(full.circuit.meta.target_site, 2));
        REQUIRE(dispersion(full.circuit, inj, i, prof) == Catch::Approx(1.0).margin(1e-12));
    }

    // Z0: local, D = 1 at every other site
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            ErrorInjection inj(center, error_gate(ErrorKind::Z0, k));
            REQUIRE(dispersion(full.circuit, inj, i, prof) == Catch::Approx(1.0).margin(1e-12));
        }

    // X12: local to site k and successor
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            if (i == k || i == k + 1) continue;
            ErrorInjection inj(center, error_gate(ErrorKind::X12, k));
            REQUIRE(dispersion(full.circuit, inj, i, prof) == Catch::Approx(1.0).margin(1e-12));
        }
}

TEST_CASE("Z2 dispersion matches the closed form at i = k", "[analysis]") {
    std::mt19937_64 rng(89);
    for (int n : {3, 4}) {
        auto full = build_full_mct(Topology::TypeALinear, n, flip(0, 0, 1));
        for (int trial = 0; trial < 5; ++trial) {
            AmplitudeProfile prof = test_helpers::random_profile(n, rng);
            for (int k = 1; k < n; ++k) {
                ErrorInjection inj(n, error_gate(ErrorKind::Z2, k));
                double num = dispersion(full.circuit, inj, k, prof);
                double pred = dispersion_prediction(ErrorKind::Z2, k, prof);
                INFO("n=" << n << " k=" << k);
                REQUIRE(std::abs(num - pred) < 1e-10);
            }
        }
    }
}

TEST_CASE("X01 dispersion matches the closed form at i = k on uniform profiles", "[analysis]") {
    for (int n : {3, 4}) {
        auto full = build_full_mct(Topology::TypeALinear, n, flip(0, 0, 1));
        AmplitudeProfile prof = AmplitudeProfile::uniform(n);
        for (int k = 1; k < n; ++k) {
            ErrorInjection inj(n, error_gate(ErrorKind::X01, k));
            double num = dispersion(full.circuit, inj, k, prof);
            double pred = dispersion_prediction(ErrorKind::X01, k, prof);
            REQUIRE(std::abs(num - pred) < 1e-10);
        }
        // the first site is special: its error propagates as a flip pair on
        // sites 0 and 1, and the site-0 overlap stays perfect at uniform
        // amplitudes
        ErrorInjection inj0(n, error_gate(ErrorKind::X01, 0));
        REQUIRE(dispersion(full.circuit, inj0, 0, prof) == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("beta = 0 at the measured site reports no Z2 dispersion", "[analysis]") {
    std::vector<std::pair<cplx, cplx>> amps(4, {cplx(1.0 / std::sqrt(2.0)), cplx(1.0 / std::sqrt(2.0))});
    amps[2] = {cplx(1.0), cplx(0.0)};
    AmplitudeProfile prof{amps};
    REQUIRE(dispersion_prediction(ErrorKind::Z2, 2, prof) == Catch::Approx(1.0));
    auto full = build_full_mct(Topology::TypeALinear, 4, flip(0, 0, 1));
    ErrorInjection inj(4, error_gate(ErrorKind::Z2, 2));
    REQUIRE(dispersion(full.circuit, inj, 2, prof) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("uniform Z2 dispersion at the first site vanishes", "[analysis]") {
    // 1 - 4 * 1 * 1/4 = 0 with P_0 = 1
    AmplitudeProfile prof = AmplitudeProfile::uniform(3);
    REQUIRE(dispersion_prediction(ErrorKind::Z2, 0, prof) == Catch::Approx(0.0).margin(1e-15));
    // alpha = 1 gives 1 - P_i for the X01 form
    std::vector<std::pair<cplx, cplx>> amps = {{cplx(1.0 / std::sqrt(2.0)), cplx(1.0 / std::sqrt(2.0))},
                                               {cplx(1.0), cplx(0.0)},
                                               {cplx(1.0 / std::sqrt(2.0)), cplx(1.0 / std::sqrt(2.0))}};
    AmplitudeProfile p2{amps};
    PrefixProduct P(p2);
    REQUIRE(dispersion_prediction(ErrorKind::X01, 1, p2) == Catch::Approx(1.0 - P[1]));
}

TEST_CASE("dispersion sweep pins the diagonal relation", "[analysis]") {
    // the sweep that fixed the (i, k) convention: the closed forms hold on
    // the i = k diagonal for k >= 1, Z2 for any profile, X01 at uniform
    // amplitudes; the k = 0 errors act locally (Z2 trivially, X01 on the
    // {0, 1} pair)
    int n = 4;
    auto full = build_full_mct(Topology::TypeALinear, n, flip(0, 0, 1));
    AmplitudeProfile prof = AmplitudeProfile::uniform(n);
    for (ErrorKind kind : {ErrorKind::Z2, ErrorKind::X01}) {
        for (int k = 0; k < n; ++k) {
            ErrorInjection inj(n, error_gate(kind, k));
            for (int i = 0; i < n; ++i) {
                double num = dispersion(full.circuit, inj, i, prof);
                double pred = dispersion_prediction(kind, i, prof);
                bool on_diagonal = (i == k && k >= 1);
                if (on_diagonal) REQUIRE(std::abs(num - pred) < 1e-10);
                if (kind == ErrorKind::Z2 && k == 0)
                    REQUIRE(num == Catch::Approx(1.0).margin(1e-12));
                bool x01_first_pair = (kind == ErrorKind::X01 && k == 0 && i == 1);
                if (i > k && !x01_first_pair) REQUIRE(num == Catch::Approx(1.0).margin(1e-10));
            }
        }
    }
}
