// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#define DOCTEST_CONFIG_DISABLE
#include "helpers.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "mrange/ando.hpp"
#include "mrange/cpmaps.hpp"
#include "mrange/dilation.hpp"
#include "mrange/feasibility.hpp"
#include "mrange/matrange.hpp"
#include "mrange/numrange.hpp"
#include "mrange/toeplitz.hpp"

using namespace mrange;
using testutil::max_abs;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double min_eig(const CMat& h) { return Eigen::SelfAdjointEigenSolver<CMat>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff(); }

CMat diag2(double a, double b) {
    CMat d = CMat::Zero(2, 2);
    d(0, 0) = a;
    d(1, 1) = b;
    return d;
}

double uniform(std::mt19937_64& gen, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }

int uniform_int(std::mt19937_64& gen, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }

Outcome exact_values() {
    const CMat e21 = matrix_unit(2, 1, 0);
    double err = 0.0;
    const AndoDecomposition a = ando_decompose(e21);
    err = std::max(err, max_abs(a.x - diag2(0.75, 1.0)));
    err = std::max(err, max_abs(a.y_max - diag2(0.5, 1.0)));
    err = std::max(err, max_abs(a.y_min - diag2(-1.0, -0.5)));
    const cplx phase = a.z(1, 0);
    err = std::max(err, std::abs(std::abs(phase) - 1.0));
    err = std::max(err, max_abs(a.z - phase * e21));
    const AndoDecomposition b = ando_decompose(2.0 * e21);
    err = std::max(err, max_abs(b.x - diag2(0.0, 1.0)));
    err = std::max(err, max_abs(b.y_max - diag2(-1.0, 1.0)));
    err = std::max(err, max_abs(b.y_min - diag2(-1.0, 1.0)));
    return {err <= 1e-8, fmt("max entrywise error %.2e", err)};
}

Outcome radius_values() {
    const double w1 = num_radius(matrix_unit(2, 1, 0));
    const double w3 = num_radius(shift(3));
    const double oracle = testutil::radius_oracle(shift(3), 100000);
    const double e1 = std::abs(w1 - 0.5);
    const double e3 = std::max(std::abs(w3 - std::cos(M_PI / 4)), std::abs(w3 - oracle));
    return {e1 <= 1e-10 && e3 <= 1e-8, fmt("|w(E21) - 1/2| = %.2e, |w(S3) - cos(pi/4)| and oracle gap <= %.2e", e1, e3)};
}

Outcome two_dilation_identity() {
    std::mt19937_64 gen(3003);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const int d = uniform_int(gen, 2, 4);
        const CMat t = testutil::with_radius(testutil::gaussian(d, d, gen), 1.0);
        const std::vector<CMat> corners = two_dilation(t, 16).corner_powers(7);
        CMat p = identity(d);
        for (int n = 1; n <= 7; ++n) {
            p = p * t;
            worst = std::max(worst, op_norm(corners[static_cast<std::size_t>(n)] - 0.5 * p));
        }
    }
    return {worst <= 1e-9, fmt("20 samples, max ||(U^n)_00 - T^n/2|| = %.2e", worst)};
}

Outcome fejer_riesz_round_trip() {
    std::mt19937_64 gen(3004);
    double worst = 0.0;
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
        const int deg = uniform_int(gen, 0, 8);
        const CMat q = testutil::gaussian(deg + 1, 1, gen);
        std::vector<cplx> a;
        for (int k = 0; k <= deg; ++k) {
            cplx s = 0.0;
            for (int l = 0; l + k <= deg; ++l) s += q(l + k, 0) * std::conj(q(l, 0));
            a.push_back(k == 0 ? cplx(s.real() + 0.01) : s);
        }
        try {
            const FejerRiesz f = fejer_riesz(TrigPoly{a});
            double err = 0.0, tmax = 0.0;
            for (int g = 0; g < 4096; ++g) {
                const double th = 2.0 * M_PI * g / 4096;
                cplx tau = a[0], p = 0.0;
                for (std::size_t k = 1; k < a.size(); ++k) tau += 2.0 * (a[k] * std::polar(1.0, k * th)).real();
                for (std::size_t k = 0; k < f.p.size(); ++k) p += f.p[k] * std::polar(1.0, k * th);
                err = std::max(err, std::abs(tau.real() - std::norm(p)));
                tmax = std::max(tmax, tau.real());
            }
            const double rel = err / (1.0 + tmax);
            worst = std::max(worst, rel);
            if (rel <= 1e-7) ++ok;
        } catch (const Error&) {
        }
    }
    return {ok == 100, fmt("%.0f/100 within bound, max grid error / (1 + max tau) = %.2e", ok, worst)};
}

Outcome moment_recovery() {
    std::mt19937_64 gen(3005);
    int ok = 0;
    double worst_moment = 0.0, worst_eig = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int n = uniform_int(gen, 1, 6);
        std::vector<cplx> a(static_cast<std::size_t>(n), 0.0);
        if (i % 2 == 0) {
            // moments of a random measure; fewer atoms than n gives a singular matrix
            const int atoms = uniform_int(gen, 1, 2 * n);
            for (int j = 0; j < atoms; ++j) {
                const double th = uniform(gen, 0.0, 2.0 * M_PI), w = uniform(gen, 0.0, 1.0);
                for (int k = 0; k < n; ++k) a[static_cast<std::size_t>(k)] += w * std::polar(1.0, k * th);
            }
        } else {
            // random off-diagonal coefficients, a_0 lifted to a random PSD margin
            const CMat g = testutil::gaussian(n, 1, gen);
            for (int k = 1; k < n; ++k) a[static_cast<std::size_t>(k)] = g(k, 0);
            a[0] = 0.0;
            a[0] = -min_eig(toeplitz_assemble(a)) + uniform(gen, 0.0, 0.5);
        }
        try {
            const AtomicMeasure mu = measure_from_toeplitz(a);
            double err = 0.0;
            for (int k = 0; k < n; ++k) {
                cplx m = 0.0;
                for (std::size_t j = 0; j < mu.nodes.size(); ++j) m += mu.weights[j] * std::polar(1.0, k * mu.nodes[j]);
                err = std::max(err, std::abs(m - a[static_cast<std::size_t>(k)]));
            }
            const double e = min_eig(toeplitz_assemble(toeplitz_from_measure(mu, n)));
            worst_moment = std::max(worst_moment, err);
            worst_eig = std::min(worst_eig, e);
            if (err <= 1e-6 && e >= -1e-9) ++ok;
        } catch (const Error&) {
        }
    }
    return {ok == 50, fmt("%.0f/50 recovered, max moment error %.2e, min eigenvalue %.2e", ok, worst_moment, worst_eig)};
}

Outcome nilpotent_dichotomy() {
    std::mt19937_64 gen(3006);
    int agree = 0, feasible = 0, verified = 0;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int d = uniform_int(gen, 1, 4);
        double target = 0.0;
        do target = uniform(gen, 0.05, 1.0);
        while (std::abs(target - 0.5) <= 0.01);
        const CMat t = testutil::with_radius(testutil::gaussian(d, d, gen), target);
        const bool inside = testutil::radius_oracle(t) <= 0.5;
        const NilpotentMargin m = nilpotent_condition(t, 2, 720);
        if (m.holds == inside) ++agree;
        if (!m.holds) continue;
        ++feasible;
        try {
            const NilpotentDilation nd = nilpotent_dilation(t, 2);
            const double err = max_abs(nd.v.adjoint() * kron(shift(2), identity(nd.r)) * nd.v - t);
            const double iso = max_abs(nd.v.adjoint() * nd.v - identity(d));
            worst = std::max(worst, err);
            if (err <= 1e-7 && iso <= 1e-10) ++verified;
        } catch (const Error&) {
        }
    }
    return {agree == 200 && verified == feasible,
            fmt("sign agreement %.0f/200, verified dilations %.0f/%.0f", agree, verified, feasible) +
                fmt(", max |V*(S2 x I)V - T| = %.2e", worst)};
}

Outcome equivalence() {
    std::mt19937_64 gen(3007);
    int agree = 0;
    std::string first_bad;
    for (int i = 0; i < 50; ++i) {
        const int d = uniform_int(gen, 2, 4);
        double target = 0.0;
        do target = uniform(gen, 0.3, 1.7);
        while (std::abs(target - 1.0) <= 0.011);
        const CMat t = testutil::with_radius(testutil::gaussian(d, d, gen), target);
        try {
            const EquivalenceReport r = equivalence_suite(t);
            if (r.all_agree && r.conditions[0] == (target <= 1.0)) {
                ++agree;
            } else if (first_bad.empty()) {
                first_bad = fmt(" (first disagreement at w = %.4f)", target);
            }
        } catch (const Error& e) {
            if (first_bad.empty()) first_bad = " (" + std::string(e.name()) + ")";
        }
    }
    return {agree == 50, fmt("%.0f/50 samples with all nine conditions agreeing", agree) + first_bad};
}

Outcome smith_ward() {
    std::mt19937_64 gen(3008);
    double worst = 1e300;
    for (int i = 0; i < 50; ++i) {
        const int d = uniform_int(gen, 2, 8);
        const CMat t = testutil::gaussian(d, d, gen);
        const double norm = Eigen::JacobiSVD<CMat>(t).singularValues()(0);
        worst = std::min(worst, smith_ward_nu(t, 2).nu_lower - norm);
    }
    return {worst >= -1e-8, fmt("min (compression norm - ||T||) = %.2e", worst)};
}

Outcome cp_pipeline() {
    std::mt19937_64 gen(3009);
    int ok = 0;
    double choi_min = 0.0, kraus_err = 0.0, iso_err = 0.0, comp_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int m = uniform_int(gen, 1, 3);
        const CMat t = testutil::with_radius(testutil::gaussian(m, m, gen), uniform(gen, 0.0, 0.45));
        FeasibilityProblem p = choi_problem(2, m);
        constrain_unital(p, 2, m);
        constrain_map_value(p, 2, m, 1, 0, t);
        constrain_map_value(p, 2, m, 0, 1, t.adjoint());
        try {
            const FeasibilityOutcome out = solve_feasibility(p);
            if (out.status != FeasibilityStatus::Feasible) continue;
            const ChoiMat c = choi_from_outcome(2, m, out);
            const double e0 = min_eig(c.block);
            const double e1 = max_abs(choi(map_from_kraus(kraus_from_choi(c), 2)).block - c.block);
            const StinespringForm s = stinespring(unital_normalize(map_from_choi(c)));
            const double e2 = max_abs(s.v.adjoint() * s.v - identity(m));
            const double e3 = max_abs(s.v.adjoint() * kron(matrix_unit(2, 1, 0), identity(s.r)) * s.v - t);
            choi_min = std::min(choi_min, e0);
            kraus_err = std::max(kraus_err, e1);
            iso_err = std::max(iso_err, e2);
            comp_err = std::max(comp_err, e3);
            if (e0 >= -1e-7 && e1 <= 1e-8 && e2 <= 1e-10 && e3 <= 1e-7) ++ok;
        } catch (const Error&) {
        }
    }
    return {ok == 100, fmt("%.0f/100 solves verified; min Choi eigenvalue %.2e, Kraus error %.2e", ok, choi_min, kraus_err) +
                           fmt(", isometry %.2e, compression %.2e", iso_err, comp_err)};
}

Outcome pd_bridge() {
    std::mt19937_64 gen(3010);
    int agree = 0;
    std::string missed;
    auto check = [&](double target) {
        const int d = uniform_int(gen, 2, 4);
        const CMat t = testutil::with_radius(testutil::gaussian(d, d, gen), target);
        std::vector<CMat> blocks{identity(d)};
        CMat p = identity(d);
        for (int k = 1; k <= 6; ++k) {
            p = p * t;
            blocks.push_back(0.5 * p);
        }
        const bool passes = pd_function_check(blocks).positive;
        if (passes == (target <= 1.0)) {
            ++agree;
        } else {
            missed += fmt(" %.4f", target);
        }
    };
    for (int i = 0; i < 30; ++i) check(uniform(gen, 0.2, 1.0));
    for (int i = 0; i < 30; ++i) check(uniform(gen, 1.05, 1.5));
    return {agree == 60, fmt("%.0f/60 agree", agree) + (missed.empty() ? "" : "; disagreeing w:" + missed)};
}

Outcome closure() {
    std::mt19937_64 gen(3011);
    int ok = 0;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int k = uniform_int(gen, 1, 4), n = uniform_int(gen, 1, 3);
        const int m = uniform_int(gen, 1, std::min(3, k * n));
        std::vector<CMat> xs, as;
        bool members = true;
        const CMat v = random_isometry(k * n, m, 5000 + static_cast<std::uint64_t>(i));
        for (int j = 0; j < k; ++j) {
            const CMat x = testutil::with_radius(testutil::gaussian(n, n, gen), uniform(gen, 0.0, 0.5));
            members = members && member_e21(x).member;
            xs.push_back(x);
            as.push_back(v.middleRows(j * n, n));
        }
        if (!members) continue;
        const double w = testutil::radius_oracle(cstar_convex(xs, as));
        worst = std::max(worst, w);
        if (w <= 0.5 + 1e-8) ++ok;
    }
    int spatial_ok = 0;
    const CMat e21 = matrix_unit(2, 1, 0);
    for (int i = 0; i < 500; ++i) {
        const CMat s = spatial_samples(e21, 1 + i % 2, 1, 7000 + static_cast<std::uint64_t>(i)).front();
        if (member_e21(s).member && testutil::radius_oracle(s, 2000) <= 0.5 + 1e-8) ++spatial_ok;
    }
    return {ok == 200 && spatial_ok == 500,
            fmt("%.0f/200 combinations (max w %.10f), %.0f/500 spatial samples", ok, worst, spatial_ok)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact Ando values for E21 and 2 E21", exact_values},
        {"numerical radius of E21 and S3", radius_values},
        {"2-dilation compression identity", two_dilation_identity},
        {"Fejer-Riesz round trip", fejer_riesz_round_trip},
        {"scalar moment recovery", moment_recovery},
        {"nilpotent n = 2 dichotomy", nilpotent_dichotomy},
        {"nine-way equivalence", equivalence},
        {"Smith-Ward compression", smith_ward},
        {"CP pipeline integrity", cp_pipeline},
        {"positive-definite function bridge", pd_bridge},
        {"matricial range closure", closure},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s [%2zu] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
