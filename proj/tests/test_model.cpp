#include "test_helpers.hpp"

using namespace darkgate;
using Catch::Approx;

TEST_CASE("build_h entries match the truncated matrices", "[model]") {
    // unprimed: rows ((0,0,l1),(0,0,-l2),(l1*,-l2*,0))
    CouplingSet c{cplx(1.0, 2.0), cplx(3.0, -1.0), cplx(0.5, 0.5)};
    Hamiltonian3 h = build_h(branches::d1, c);
    CHECK(h(0, 2) == c.lambda1);
    CHECK(h(1, 2) == -c.lambda2);
    CHECK(h(2, 0) == std::conj(c.lambda1));
    CHECK(h(2, 1) == std::conj(-c.lambda2));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(h(i, i)) == 0.0);
    CHECK(std::abs(h(0, 1)) == 0.0);

    // primed alpha = 1: the lambda3 entry carries c_1 = -1
    Hamiltonian3 hp = build_h(branches::d1_primed, CouplingSet{1.0, 0.0, 1.0});
    CHECK(hp(1, 2).real() == Approx(-1.0));
    CHECK(hp(1, 2).imag() == Approx(0.0).margin(0.0));
    // alpha = 2 flips to +1
    Hamiltonian3 hp2 = build_h(branches::d2_primed, CouplingSet{1.0, 0.0, 1.0});
    CHECK(hp2(1, 2).real() == Approx(1.0));

    Hamiltonian3 z = build_h(branches::d2_primed, CouplingSet{0.0, 0.0, 0.0});
    CHECK(z.frobenius_norm() == 0.0);
}

TEST_CASE("build_h is Hermitian for arbitrary complex couplings", "[model]") {
    Rng rng(100);
    for (int i = 0; i < 1000; ++i) {
        CouplingSet c = testing::random_couplings(rng);
        for (const BranchId& b : gate_branch_order()) {
            Hamiltonian3 h = build_h(b, c);
            for (int r = 0; r < 3; ++r) {
                for (int col = 0; col < 3; ++col) {
                    CHECK(std::abs(h(r, col) - std::conj(h(col, r))) <= 1e-14);
                }
            }
        }
    }
}

TEST_CASE("dark_state closed forms", "[model]") {
    StateVector d = dark_state(branches::d1, CouplingSet{3.0, 4.0, 0.0});
    CHECK(d.amps[0].real() == Approx(0.8));
    CHECK(d.amps[1].real() == Approx(0.6));
    CHECK(d.amps[2] == cplx(0.0, 0.0));
    CHECK(d.basis_tag == Subspace::unprimed);

    // theta' = 0 start of stage one: -c_1 cos 0 = +1
    StateVector p1 = dark_state(branches::d1_primed, CouplingSet{0.0, 0.0, 2.5});
    CHECK(p1.amps[0].real() == Approx(1.0));
    CHECK(std::abs(p1.amps[1]) == Approx(0.0).margin(0.0));
    CHECK(p1.basis_tag == Subspace::primed);

    // theta' = pi/2: (0, 1, 0)
    StateVector p2 = dark_state(branches::d2_primed, CouplingSet{2.5, 0.0, 0.0});
    CHECK(std::abs(p2.amps[0]) == Approx(0.0).margin(0.0));
    CHECK(p2.amps[1].real() == Approx(1.0));

    CHECK_THROWS_AS(dark_state(branches::d1, CouplingSet{0.0, 0.0, 5.0}), std::invalid_argument);
    CHECK_THROWS_AS(dark_state(branches::d1_primed, CouplingSet{0.0, 5.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("dark_state is annihilated by its Hamiltonian", "[model]") {
    Rng rng(200);
    for (int i = 0; i < 1000; ++i) {
        CouplingSet c = testing::random_couplings(rng);
        for (const BranchId& b : gate_branch_order()) {
            StateVector d = dark_state(b, c);
            Vec3c hd = build_h(b, c).apply(d.amps);
            CHECK(testing::vec_norm(hd) < 1e-12);
            CHECK(d.amps[2] == cplx(0.0, 0.0)); // photonic amplitude exactly zero
            CHECK(d.amps[1].imag() == 0.0);     // gauge: second component real
            CHECK(d.amps[1].real() >= 0.0);
        }
    }
}

TEST_CASE("dark_state matches (cos, sin, 0) for real couplings", "[model]") {
    Rng rng(300);
    for (int i = 0; i < 200; ++i) {
        CouplingSet c{rng.uniform(0.0, 10.0), rng.uniform(1e-6, 10.0), rng.uniform(1e-6, 10.0)};
        double th = mixing_angle(branches::d1, c);
        StateVector d = dark_state(branches::d1, c);
        CHECK(d.amps[0].real() == Approx(std::cos(th)).margin(1e-12));
        CHECK(d.amps[1].real() == Approx(std::sin(th)).margin(1e-12));

        for (const BranchId& b : {branches::d1_primed, branches::d2_primed}) {
            double thp = mixing_angle(b, c);
            StateVector dp = dark_state(b, c);
            CHECK(dp.amps[0].real() == Approx(-b.sign() * std::cos(thp)).margin(1e-12));
            CHECK(dp.amps[1].real() == Approx(std::sin(thp)).margin(1e-12));
        }
    }
}

TEST_CASE("dark_state and mixing_angle are scale invariant", "[model]") {
    Rng rng(400);
    for (int i = 0; i < 200; ++i) {
        CouplingSet c = testing::random_couplings(rng);
        double s = rng.uniform(1e-3, 1e3);
        for (const BranchId& b : gate_branch_order()) {
            StateVector d1 = dark_state(b, c);
            StateVector d2 = dark_state(b, scaled(c, s));
            for (int k = 0; k < 3; ++k) CHECK(std::abs(d1.amps[k] - d2.amps[k]) < 1e-12);
            CHECK(mixing_angle(b, c) == Approx(mixing_angle(b, scaled(c, s))).margin(1e-12));
        }
    }
}

TEST_CASE("mixing_angle values", "[model]") {
    CHECK(mixing_angle(branches::d1, CouplingSet{2.0, 2.0, 0.0}) == Approx(pi / 4));
    CHECK(mixing_angle(branches::d1, CouplingSet{0.0, 3.0, 0.0}) == Approx(0.0).margin(0.0));
    CHECK(mixing_angle(branches::d1_primed, CouplingSet{3.0, 0.0, 4.0}) ==
          Approx(std::atan(0.75)));
    CHECK_THROWS_AS(mixing_angle(branches::d1, CouplingSet{0.0, 0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("eigensystem of model Hamiltonians", "[model]") {
    Eigensystem3 es = eigensystem(build_h(branches::d1, CouplingSet{3.0, 4.0, 0.0}));
    CHECK(es.values[0] == Approx(-5.0).margin(1e-10));
    CHECK(es.values[1] == Approx(0.0).margin(1e-10));
    CHECK(es.values[2] == Approx(5.0).margin(1e-10));

    Eigensystem3 esp = eigensystem(build_h(branches::d2_primed, CouplingSet{1.0, 0.0, 1.0}));
    CHECK(esp.values[0] == Approx(-std::sqrt(2.0)).margin(1e-10));
    CHECK(esp.values[1] == Approx(0.0).margin(1e-10));
    CHECK(esp.values[2] == Approx(std::sqrt(2.0)).margin(1e-10));

    Eigensystem3 esz = eigensystem(Hamiltonian3{});
    for (double v : esz.values) CHECK(v == 0.0);
}

TEST_CASE("eigensystem residuals and orthonormality on random inputs", "[model]") {
    Rng rng(500);
    for (int i = 0; i < 300; ++i) {
        // random Hermitian: model-built plus a random real diagonal
        Hamiltonian3 h = build_h(i % 2 ? branches::d1 : branches::d2_primed,
                                 testing::random_couplings(rng));
        if (i % 3 == 0) {
            for (int k = 0; k < 3; ++k) h(k, k) = rng.uniform(-5.0, 5.0);
        }
        Eigensystem3 es = eigensystem(h);
        CHECK(es.values[0] <= es.values[1]);
        CHECK(es.values[1] <= es.values[2]);
        for (int k = 0; k < 3; ++k) {
            Vec3c hv = h.apply(es.vectors[k]);
            double resid = 0.0;
            for (int r = 0; r < 3; ++r) resid += std::norm(hv[r] - es.values[k] * es.vectors[k][r]);
            CHECK(std::sqrt(resid) < 1e-10);
            for (int j = 0; j < 3; ++j) {
                cplx g = detail::vec_dot(es.vectors[k], es.vectors[j]);
                CHECK(std::abs(g - (k == j ? 1.0 : 0.0)) < 1e-10);
            }
        }
    }
}

TEST_CASE("spectral symmetry (-g, 0, +g) for model Hamiltonians", "[model]") {
    Rng rng(600);
    for (int i = 0; i < 300; ++i) {
        CouplingSet c = testing::random_couplings(rng);
        for (const BranchId& b : gate_branch_order()) {
            double g = std::hypot(std::abs(c.lambda1), std::abs(b.primed ? c.lambda3 : c.lambda2));
            Eigensystem3 es = eigensystem(build_h(b, c));
            CHECK(es.values[0] == Approx(-g).margin(1e-10 * std::max(1.0, g)));
            CHECK(es.values[1] == Approx(0.0).margin(1e-10 * std::max(1.0, g)));
            CHECK(es.values[2] == Approx(g).margin(1e-10 * std::max(1.0, g)));
        }
    }
}

TEST_CASE("eigensystem rejects non-Hermitian input", "[model]") {
    Hamiltonian3 h;
    h(0, 1) = cplx(1.0, 0.0);
    h(1, 0) = cplx(2.0, 0.0);
    CHECK_THROWS_AS(eigensystem(h), std::invalid_argument);
}

TEST_CASE("branch ids", "[model]") {
    CHECK(branches::d1.sign() == -1.0);
    CHECK(branches::d2.sign() == 1.0);
    CHECK(branches::d1_primed.label() == "D1p");
    CHECK(branches::d2.label() == "D2");
    CHECK_THROWS_AS((BranchId{3, false}.validate()), std::invalid_argument);
}
