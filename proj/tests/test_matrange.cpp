#include "helpers.hpp"

#include "mrange/matrange.hpp"
#include "mrange/numrange.hpp"

using namespace mrange;
using testutil::max_abs;

namespace {

const CMat e21 = matrix_unit(2, 1, 0);

CMat diag2(cplx a, cplx b) {
    CMat d = CMat::Zero(2, 2);
    d(0, 0) = a;
    d(1, 1) = b;
    return d;
}

// Checks the weights witness directly: PSD, sum H_j = I, sum lambda_j H_j = X.
double weights_defect(const std::vector<cplx>& points, const CMat& x, const std::vector<CMat>& h) {
    const int d = static_cast<int>(x.rows());
    CMat sum = CMat::Zero(d, d), mom = CMat::Zero(d, d);
    double neg = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
        sum += h[j];
        mom += points[j] * h[j];
        neg = std::max(neg, -Eigen::SelfAdjointEigenSolver<CMat>(h[j]).eigenvalues().minCoeff());
    }
    return std::max({neg, max_abs(sum - identity(d)), max_abs(mom - x)});
}

std::vector<cplx> roots_of_unity(int k) {
    std::vector<cplx> r;
    for (int j = 0; j < k; ++j) r.push_back(std::polar(1.0, 2.0 * M_PI * j / k));
    return r;
}

}  // namespace

TEST_CASE("member_e21") {
    const MembershipVerdict in = member_e21(0.5 * e21);
    CHECK(in.member);
    CHECK(in.margin == doctest::Approx(0.25));
    REQUIRE(in.witness_map.has_value());
    CHECK(max_abs(in.witness_map->at(1, 0) - 0.5 * e21) <= 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<CMat>(choi(*in.witness_map).block).eigenvalues().minCoeff() >= -1e-9);
    CHECK(in.witness_map->unital_defect() <= 1e-12);

    const MembershipVerdict edge = member_e21(e21);
    CHECK(edge.member);
    CHECK(std::abs(edge.margin) <= 1e-10);

    const MembershipVerdict out = member_e21(0.6 * identity(2));
    CHECK_FALSE(out.member);
    CHECK(out.margin == doctest::Approx(-0.1));
    CHECK_FALSE(out.witness_map.has_value());

    std::mt19937_64 gen(201);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + trial % 3;
        const double w = 0.1 + 0.04 * trial;
        const CMat x = testutil::with_radius(testutil::gaussian(d, d, gen), w);
        const MembershipVerdict v = member_e21(x);
        CHECK(v.member == (w <= 0.5));
        CHECK((v.margin >= 0.0) == v.member);
    }
}

TEST_CASE("member_shift_ball") {
    const CMat x = 0.9 * e21;
    const MembershipVerdict v = member_shift_ball(x);
    CHECK(v.member);
    CHECK(v.margin == doctest::Approx(0.1));
    if (!v.unverified) {
        CHECK(v.witness_weights.size() == 64);
        CHECK(weights_defect(roots_of_unity(64), x, v.witness_weights) <= 1e-6);
    }

    // a small diagonal contraction is an average of unitaries
    const CMat y = diag2(0.3, cplx(0.0, -0.5));
    const MembershipVerdict vy = member_shift_ball(y, 16);
    CHECK(vy.member);
    CHECK_FALSE(vy.unverified);
    CHECK(weights_defect(roots_of_unity(16), y, vy.witness_weights) <= 1e-6);

    const MembershipVerdict out = member_shift_ball(1.2 * e21);
    CHECK_FALSE(out.member);
    CHECK(out.margin == doctest::Approx(-0.2));

    // near the sphere no witness is attempted, the verdict stands
    const MembershipVerdict near = member_shift_ball(0.97 * e21);
    CHECK(near.member);
    CHECK(near.witness_weights.empty());
    CHECK_THROWS_AS(member_shift_ball(e21, 2), Error);
}

TEST_CASE("member_normal") {
    const std::vector<cplx> seg{1.0, -1.0};
    const CMat x = diag2(0.5, -0.2);
    const MembershipVerdict v = member_normal(seg, x);
    CHECK(v.member);
    CHECK(weights_defect(seg, x, v.witness_weights) <= 1e-6);

    const MembershipVerdict off = member_normal(seg, diag2(cplx(0.0, 0.5), 0.0));
    CHECK_FALSE(off.member);
    CHECK_FALSE(off.unverified);
    CHECK(off.margin == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(off.note.find("Infeasible") != std::string::npos);

    const std::vector<cplx> tri = roots_of_unity(3);
    const MembershipVerdict zero = member_normal(tri, CMat::Zero(2, 2));
    CHECK(zero.member);
    CHECK(weights_defect(tri, CMat::Zero(2, 2), zero.witness_weights) <= 1e-6);

    // the C*-convex hull of the spectrum is larger than the diagonal matrices:
    // a compression of the normal operator diag(1, w, w^2) is a member
    const CMat n3 = diag2(1.0, tri[1]);
    CMat big = CMat::Zero(3, 3);
    for (int k = 0; k < 3; ++k) big(k, k) = tri[static_cast<std::size_t>(k)];
    const CMat v3 = random_isometry(3, 2, 17);
    const CMat comp = v3.adjoint() * big * v3;
    const MembershipVerdict c = member_normal(tri, comp);
    CHECK(c.member);
    CHECK(weights_defect(tri, comp, c.witness_weights) <= 1e-6);
    CHECK(member_normal(tri, n3).member);

    CHECK_THROWS_AS(member_normal({}, x), Error);
}

TEST_CASE("spatial samples stay in the matricial range") {
    const std::vector<CMat> a = spatial_samples(e21, 1, 50, 9);
    const std::vector<CMat> b = spatial_samples(e21, 1, 50, 9);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK(std::abs(a[i](0, 0)) <= 0.5 + 1e-12);
    }
    for (const CMat& s : spatial_samples(e21, 2, 50, 10)) CHECK(num_radius(s) <= 0.5 + 1e-10);

    const CMat s3 = shift(3);
    for (const CMat& s : spatial_samples(s3, 2, 30, 11)) CHECK(num_radius(s) <= std::sqrt(0.5) + 1e-10);
    CHECK_THROWS_AS(spatial_samples(e21, 3, 1, 0), Error);
}

TEST_CASE("smith_ward_nu") {
    std::mt19937_64 gen(202);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + trial % 7;
        const CMat t = testutil::gaussian(d, d, gen);
        const SmithWard sw = smith_ward_nu(t, 2);
        CHECK(max_abs(sw.basis.adjoint() * sw.basis - identity(2)) <= 1e-10);
        CHECK(max_abs(sw.compression - sw.basis.adjoint() * t * sw.basis) <= 1e-12);
        CHECK(sw.nu_lower >= Eigen::JacobiSVD<CMat>(t).singularValues()(0) - 1e-8);
    }
    CHECK_THROWS_AS(smith_ward_nu(e21, 3), Error);
}

TEST_CASE("operator-system probes") {
    // E21 and E21 + 0.3 E21 as a direct sum share matricial ranges
    CMat t = CMat::Zero(4, 4);
    t.block(0, 0, 2, 2) = e21;
    t.block(2, 2, 2, 2) = 0.3 * e21;
    const ProbeReport same = opsys_probe(e21, t, 2, 40, 5);
    CHECK(same.samples == 40);
    CHECK(same.records.size() == 40);
    CHECK(same.max_gap <= 1e-9);

    const ProbeReport diff = opsys_probe(e21, 2.0 * e21, 2, 40, 5);
    CHECK(diff.max_gap > 0.1);
    CHECK(diff.records[static_cast<std::size_t>(diff.argmax)].gap == diff.max_gap);
    for (const ProbeRecord& r : diff.records) CHECK(r.gap >= 0.0);
    // deterministic under the seed
    const ProbeReport again = opsys_probe(e21, 2.0 * e21, 2, 40, 5);
    CHECK(again.max_gap == diff.max_gap);

    // probe_pair against a direct evaluation
    std::mt19937_64 gen(203);
    const CMat a = testutil::gaussian(2, 2, gen), b = testutil::gaussian(2, 2, gen);
    const ProbeRecord r = probe_pair(e21, t, a, b);
    const CMat direct = kron(a, identity(2)) + kron(b, e21);
    CHECK(std::abs(r.norm_s - Eigen::JacobiSVD<CMat>(direct).singularValues()(0)) <= 1e-12);
}

TEST_CASE("equivalence suite") {
    const EquivalenceReport in = equivalence_suite(e21);
    for (std::size_t k = 0; k < 9; ++k) {
        INFO("condition " << k + 1 << " " << in.notes[k]);
        CHECK(in.conditions[k]);
    }
    CHECK(in.all_agree);

    const EquivalenceReport out = equivalence_suite(1.2 * identity(2));
    for (std::size_t k = 0; k < 9; ++k) {
        INFO("condition " << k + 1 << " " << out.notes[k]);
        CHECK_FALSE(out.conditions[k]);
    }
    CHECK(out.all_agree);

    try {
        equivalence_suite(2.0 * e21);
        FAIL("expected BoundaryBand");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BoundaryBand);
    }

    std::mt19937_64 gen(204);
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 2 + trial % 2;
        const double w = trial % 2 == 0 ? 0.6 + 0.05 * trial : 1.1 + 0.1 * trial;
        const EquivalenceReport r = equivalence_suite(testutil::with_radius(testutil::gaussian(d, d, gen), w));
        INFO("w = " << w);
        CHECK(r.all_agree);
        CHECK(r.conditions[0] == (w <= 1.0));
    }
}
