#include "helpers.hpp"

#include "mrange/ando.hpp"
#include "mrange/cpmaps.hpp"
#include "mrange/numrange.hpp"

using namespace mrange;
using testutil::max_abs;

namespace {

MapOnUnits random_map(int n, int m, std::mt19937_64& gen) {
    std::vector<CMat> values;
    for (int k = 0; k < n * n; ++k) values.push_back(testutil::gaussian(m, m, gen));
    return MapOnUnits(n, m, values);
}

// Random ucp map: random PSD Choi, then the symmetric unital correction.
// phi(I) has rank at most n * rank, so rank >= m keeps it invertible.
MapOnUnits random_ucp(int n, int m, int rank, std::mt19937_64& gen) {
    const CMat g = testutil::gaussian(n * m, std::max(rank, m), gen);
    return unital_normalize(map_from_choi({n, m, g * g.adjoint()}));
}

}  // namespace

TEST_CASE("choi examples") {
    const ChoiMat id = choi(MapOnUnits::identity(2));
    CMat expect(4, 4);
    expect << 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1;
    CHECK(id.block == expect);
    CHECK(numerical_rank(id.block) == 1);
    CHECK(psd_check(id.block).psd);

    // transpose: block (i,j) = E_ji, which is the swap operator
    const ChoiMat tr = choi(MapOnUnits::transpose(2));
    CMat swap = CMat::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    CHECK(tr.block == swap);
    const RVec ev = herm_eig(tr.block).eigenvalues;
    CHECK(std::abs(ev(0) + 1.0) < 1e-14);
    for (int k = 1; k < 4; ++k) CHECK(std::abs(ev(k) - 1.0) < 1e-14);

    const MapOnUnits half_trace = MapOnUnits::from_action(2, 2, [](const CMat& x) { return CMat(x.trace() / 2.0 * identity(2)); });
    CHECK(max_abs(choi(half_trace).block - 0.5 * identity(4)) < 1e-15);
}

TEST_CASE("is_cp") {
    CHECK(is_cp(MapOnUnits::identity(3)).psd);
    const PsdResult t = is_cp(MapOnUnits::transpose(2));
    CHECK_FALSE(t.psd);
    CHECK(t.min_eig == doctest::Approx(-1.0));
    CHECK(is_cp(ucp_from_e21(matrix_unit(2, 1, 0))).psd);
}

TEST_CASE("choi round trip and linearity") {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 10; ++trial) {
        const MapOnUnits a = random_map(2 + trial % 3, 1 + trial % 4, gen);
        const MapOnUnits back = map_from_choi(choi(a));
        for (int i = 0; i < a.n(); ++i) {
            for (int j = 0; j < a.n(); ++j) CHECK(max_abs(back.at(i, j) - a.at(i, j)) <= 1e-10);
        }
        const CMat x = testutil::gaussian(a.n(), a.n(), gen);
        const CMat y = testutil::gaussian(a.n(), a.n(), gen);
        CHECK(max_abs(mrange::apply(a, 2.0 * x + y) - 2.0 * mrange::apply(a, x) - mrange::apply(a, y)) < 1e-12);
    }
    CHECK_THROWS_AS(map_from_choi({2, 2, CMat::Zero(3, 3)}), Error);
    CHECK_THROWS_AS(MapOnUnits(2, 2, std::vector<CMat>(3, CMat::Zero(2, 2))), Error);
}

TEST_CASE("kraus decomposition") {
    const KrausSet id = kraus_from_choi(choi(MapOnUnits::identity(2)));
    REQUIRE(id.operators.size() == 1);
    const CMat k = id.operators.front();
    // identity up to a phase
    const cplx phase = k(0, 0);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
    CHECK(max_abs(k - phase * identity(2)) < 1e-12);

    const ChoiMat half{2, 2, 0.5 * identity(4)};
    const KrausSet ks = kraus_from_choi(half);
    CHECK(ks.operators.size() == 4);
    const MapOnUnits rebuilt = map_from_kraus(ks, 2);
    CHECK(max_abs(choi(rebuilt).block - half.block) <= 1e-8);

    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 2, m = 2 + trial % 3, r = 1 + trial % 3;
        const CMat g = testutil::gaussian(n * m, r, gen);
        const ChoiMat c{n, m, g * g.adjoint()};
        const KrausSet kr = kraus_from_choi(c);
        Eigen::JacobiSVD<CMat> svd(c.block);
        int svd_rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            if (svd.singularValues()(i) > 1e-10 * svd.singularValues()(0)) ++svd_rank;
        }
        CHECK(static_cast<int>(kr.operators.size()) == svd_rank);
        CHECK(max_abs(choi(map_from_kraus(kr, n)).block - c.block) <= 1e-8);
    }

    CHECK_THROWS_AS(kraus_from_choi(choi(MapOnUnits::transpose(2))), Error);
}

TEST_CASE("stinespring") {
    const StinespringForm id = stinespring(MapOnUnits::identity(2));
    CHECK(id.r == 1);
    CHECK(max_abs(id.v.adjoint() * id.v - identity(2)) < 1e-12);
    CHECK(std::abs(std::abs(id.v(0, 0)) - 1.0) < 1e-12);

    const MapOnUnits dephase = MapOnUnits::from_action(2, 2, [](const CMat& x) { return CMat(x.diagonal().asDiagonal()); });
    const StinespringForm sd = stinespring(dephase);
    CHECK(sd.r == 2);
    CHECK(max_abs(sd.v.adjoint() * sd.v - identity(2)) < 1e-10);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(max_abs(stinespring_apply(sd, matrix_unit(2, i, j)) - dephase.at(i, j)) <= 1e-8);
        }
    }

    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 10; ++trial) {
        const MapOnUnits phi = random_ucp(2 + trial % 2, 1 + trial % 3, 1 + trial % 4, gen);
        const StinespringForm s = stinespring(phi);
        CHECK(max_abs(s.v.adjoint() * s.v - identity(phi.m())) <= 1e-10);
        for (int i = 0; i < phi.n(); ++i) {
            for (int j = 0; j < phi.n(); ++j) {
                CHECK(max_abs(stinespring_apply(s, matrix_unit(phi.n(), i, j)) - phi.at(i, j)) <= 1e-8);
            }
        }
    }

    try {
        stinespring(MapOnUnits::transpose(2));
        FAIL("expected NotCP");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotCP);
    }
    try {
        stinespring(MapOnUnits::from_action(2, 2, [](const CMat& x) { return CMat(2.0 * x); }));
        FAIL("expected NotUnital");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotUnital);
    }
}

TEST_CASE("apply and amplify") {
    std::mt19937_64 gen(2);
    const CMat t = testutil::gaussian(3, 3, gen);
    CHECK(max_abs(mrange::apply(MapOnUnits::identity(3), t) - t) < 1e-15);
    CHECK(mrange::apply(MapOnUnits::transpose(2), matrix_unit(2, 1, 0)) == matrix_unit(2, 0, 1));

    const MapOnUnits phi = random_map(2, 3, gen);
    // amplifying on the block matrix of matrix units returns the Choi matrix
    CMat units(4, 4);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) units.block(2 * i, 2 * j, 2, 2) = matrix_unit(2, i, j);
    }
    CHECK(max_abs(amplify(phi, 2, units) - choi(phi).block) < 1e-15);
    CHECK_THROWS_AS(mrange::apply(phi, identity(3)), Error);
    CHECK_THROWS_AS(amplify(phi, 2, identity(3)), Error);
}

TEST_CASE("cp maps preserve positivity and contract radius") {
    std::mt19937_64 gen(41);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 3, m = 1 + trial % 3;
        const MapOnUnits phi = random_ucp(n, m, 1 + trial % 5, gen);
        const CMat g = testutil::gaussian(n, n, gen);
        CHECK(herm_eig(mrange::apply(phi, g * g.adjoint())).eigenvalues(0) >= -1e-8);
        const CMat t = testutil::gaussian(n, n, gen);
        CHECK(op_norm(mrange::apply(phi, t)) <= op_norm(t) + 1e-8);
        CHECK(num_radius(mrange::apply(phi, t)) <= num_radius(t) + 1e-8);
        CHECK(num_radius(mrange::apply(phi, shift(n))) <= num_radius(shift(n)) + 1e-8);
    }
}

TEST_CASE("cstar_convex") {
    std::mt19937_64 gen(6);
    const CMat x = testutil::gaussian(2, 2, gen);
    const std::vector<CMat> single_x{x}, single_a{identity(2)};
    CHECK(max_abs(cstar_convex(single_x, single_a) - x) < 1e-15);

    // the pinching pair E11, E22
    const std::vector<CMat> xs{x, x}, as{matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)};
    CMat pinch = CMat::Zero(2, 2);
    pinch(0, 0) = x(0, 0);
    pinch(1, 1) = x(1, 1);
    CHECK(max_abs(cstar_convex(xs, as) - pinch) < 1e-15);

    const cplx alpha(0.3, -0.2);
    const CMat v = random_isometry(4, 2, 3);
    const std::vector<CMat> scal{alpha * identity(2), alpha * identity(2)};
    const std::vector<CMat> parts{v.topRows(2), v.bottomRows(2)};
    CHECK(max_abs(cstar_convex(scal, parts) - alpha * identity(2)) < 1e-12);

    const std::vector<CMat> bad{0.5 * identity(2)};
    try {
        cstar_convex(single_x, bad);
        FAIL("expected NotPartitionOfIdentity");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPartitionOfIdentity);
    }
}

TEST_CASE("cstar_convex stays in the w <= 1/2 ball") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 2 + trial % 3, n = 2 + trial % 2, m = 1 + trial % 3;
        std::vector<CMat> xs, as;
        const CMat v = random_isometry(k * n, m, 1000 + trial);
        for (int j = 0; j < k; ++j) {
            xs.push_back(testutil::with_radius(testutil::gaussian(n, n, gen), 0.5));
            as.push_back(v.middleRows(j * n, n));
        }
        CHECK(num_radius(cstar_convex(xs, as)) <= 0.5 + 1e-8);
    }
}
