#include "mrange/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "mrange/ando.hpp"
#include "mrange/dilation.hpp"
#include "mrange/json_io.hpp"
#include "mrange/matrange.hpp"
#include "mrange/numrange.hpp"
#include "mrange/toeplitz.hpp"

namespace mrange::cli {

namespace {

struct Options {
    std::string command;
    std::string input;
    std::string out;
    std::string set = "e21";
    std::optional<double> tol;
    int grid = 0;
    std::uint64_t seed = 0;
    int order = 2;
    int window = 16;
    int nodes = 0;
    int samples = 100;
    int threads = 1;
    bool timing = false;
};

// Returns the exit code: 0, or 2 for a false verdict of a test command.
using Handler = std::function<int(const Options&, const json&, json&, const Tolerances&)>;

CMat operand(const json& in, const char* key = "T") {
    if (in.is_object() && in.contains("rows")) return matrix_from_json(in);
    if (in.is_object() && in.contains(key)) return matrix_from_json(in[key]);
    throw Error(ErrorKind::BadJson, std::string("input needs a matrix or a \"") + key + "\" field");
}

const json& field(const json& in, const char* key) {
    if (!in.is_object() || !in.contains(key)) throw Error(ErrorKind::BadJson, std::string("input needs \"") + key + "\"");
    return in[key];
}

json psd_json(const PsdResult& r) { return {{"psd", r.psd}, {"min_eig", r.min_eig}}; }

json map_json(const MapOnUnits& m) {
    json values = json::array();
    for (int i = 0; i < m.n(); ++i) {
        for (int j = 0; j < m.n(); ++j) values.push_back(matrix_to_json(m.at(i, j)));
    }
    return {{"n", m.n()}, {"m", m.m()}, {"values", values}, {"choi", matrix_to_json(choi(m).block)}};
}

int cmd_numrad(const Options&, const json& in, json& res, const Tolerances& tol) {
    const CMat t = operand(in);
    const RadiusReport r = radius_characterizations(t, tol);
    res["radius"] = r.radius;
    res["argmax_angle"] = r.argmax_angle;
    res["conditions"] = r.conditions;
    res["worst_margin"] = r.worst_margin;
    res["consistent"] = r.consistent;
    return 0;
}

int cmd_boundary(const Options& o, const json& in, json& res, const Tolerances&) {
    res["points"] = complex_list_to_json(range_boundary(operand(in), o.grid > 0 ? o.grid : 64));
    return 0;
}

int cmd_ando(const Options&, const json& in, json& res, const Tolerances& tol) {
    const AndoDecomposition d = ando_decompose(operand(in), tol);
    res["X"] = matrix_to_json(d.x);
    res["Y_max"] = matrix_to_json(d.y_max);
    res["Y_min"] = matrix_to_json(d.y_min);
    res["Z"] = matrix_to_json(d.z);
    res["Z_min"] = matrix_to_json(d.z_min);
    res["C"] = matrix_to_json(d.c);
    res["iterations"] = d.iterations;
    const AndoResiduals& r = d.residuals;
    res["residuals"] = {{"lmi_min_eig", r.lmi_min_eig},         {"fixed_point", r.fixed_point},
                        {"reconstruct_max", r.reconstruct_max}, {"reconstruct_min", r.reconstruct_min},
                        {"reconstruct_c", r.reconstruct_c},     {"z_norm", r.z_norm},
                        {"z_isometry", r.z_isometry},           {"y_order", r.y_order}};
    res["verified"] = d.verified;
    return 0;
}

int cmd_lmi(const Options&, const json& in, json& res, const Tolerances& tol) {
    const LmiResult r = radius_lmi(operand(in), tol);
    res["holds"] = r.holds;
    res["block_min_eig"] = r.block_min_eig;
    if (r.a) {
        res["A"] = matrix_to_json(*r.a);
    } else {
        res["certificate"] = {{"angle", r.certificate_angle}, {"support_value", r.certificate_value}};
    }
    return r.holds ? 0 : 2;
}

int cmd_ucp_e21(const Options&, const json& in, json& res, const Tolerances& tol) {
    const MapOnUnits phi = ucp_from_e21(operand(in), tol);
    res["map"] = map_json(phi);
    res["cp"] = psd_json(is_cp(phi, tol));
    res["unital_defect"] = phi.unital_defect();
    return 0;
}

int cmd_dilate2(const Options& o, const json& in, json& res, const Tolerances& tol) {
    const CMat t = operand(in);
    const AndoDecomposition dec = ando_decompose(t, tol);
    const WindowedOperator u = two_dilation_from_contraction(dec.c, o.window, tol);
    const CMat dense = u.dense();
    const int powers = u.exact_powers();
    const std::vector<CMat> corners = u.corner_powers(powers);
    json errors = json::array();
    double worst = 0.0;
    CMat p = CMat::Identity(t.rows(), t.cols());
    for (int k = 1; k <= powers; ++k) {
        p = p * t;
        const double e = op_norm(corners[static_cast<std::size_t>(k)] - 0.5 * p);
        errors.push_back(e);
        worst = std::max(worst, e);
    }
    res["C"] = matrix_to_json(dec.c);
    res["window"] = u.window();
    res["band_width"] = u.band_width();
    res["exact_powers"] = powers;
    res["corner_errors"] = errors;
    res["max_corner_error"] = worst;
    res["unitarity_residual"] = (dense.adjoint() * dense - CMat::Identity(dense.rows(), dense.cols())).norm();
    return 0;
}

int cmd_bilateral(const Options& o, const json&, json& res, const Tolerances&) {
    const BilateralReport r = bilateral_e21_model(o.window);
    res["compression"] = matrix_to_json(r.compression);
    res["compression_sq"] = matrix_to_json(r.compression_sq);
    res["nonzero_entries"] = r.nonzero_entries;
    res["value"] = complex_to_json(r.value);
    res["is_e21"] = r.is_e21;
    res["is_e12"] = r.is_e12;
    res["square_vanishes"] = r.square_vanishes;
    res["orientation_note"] = "basis (e0, e1); the transpose E12 appears under the reversed order (e1, e0)";
    return 0;
}

int cmd_pdcheck(const Options&, const json& in, json& res, const Tolerances& tol) {
    const PdResult r = pd_function_check(matrix_list_from_json(field(in, "blocks")), tol);
    res["positive"] = r.positive;
    res["min_eig"] = r.min_eig;
    return r.positive ? 0 : 2;
}

int cmd_nilpotent_cond(const Options& o, const json& in, json& res, const Tolerances& tol) {
    const NilpotentMargin m = nilpotent_condition(operand(in), o.order, tol.grid_angles, tol);
    res["order"] = o.order;
    res["margin"] = m.margin;
    res["angle"] = m.angle;
    res["holds"] = m.holds;
    return m.holds ? 0 : 2;
}

int cmd_nilpotent_dilate(const Options& o, const json& in, json& res, const Tolerances& tol) {
    const NilpotentDilation d = nilpotent_dilation(operand(in), o.order, tol);
    res["order"] = d.order;
    res["r"] = d.r;
    res["N"] = matrix_to_json(d.n_op);
    res["V"] = matrix_to_json(d.v);
    res["isometry_residual"] = d.isometry_residual;
    res["compression_residual"] = d.compression_residual;
    res["margin"] = d.margin;
    res["iterations"] = d.iterations;
    return 0;
}

int cmd_fejer_riesz(const Options&, const json& in, json& res, const Tolerances& tol) {
    const FejerRiesz f = fejer_riesz(TrigPoly{complex_list_from_json(field(in, "coeffs"))}, tol);
    res["p"] = complex_list_to_json(f.p);
    res["inner_roots"] = complex_list_to_json(f.inner_roots);
    res["scale"] = f.scale;
    res["grid_error"] = f.grid_error;
    return 0;
}

int cmd_toeplitz_check(const Options&, const json& in, json& res, const Tolerances& tol) {
    PsdResult r;
    if (in.is_object() && in.contains("blocks")) {
        r = block_toeplitz_psd(matrix_list_from_json(in["blocks"]), tol);
    } else {
        r = toeplitz_psd(complex_list_from_json(field(in, "coeffs")), tol);
    }
    res["psd"] = r.psd;
    res["min_eig"] = r.min_eig;
    return r.psd ? 0 : 2;
}

int cmd_toeplitz_measure(const Options& o, const json& in, json& res, const Tolerances& tol) {
    const AtomicMeasure mu = measure_from_toeplitz(complex_list_from_json(field(in, "coeffs")), o.nodes, tol);
    res["nodes"] = mu.nodes;
    res["weights"] = mu.weights;
    res["residual"] = mu.residual;
    return 0;
}

int cmd_block_measure(const Options& o, const json& in, json& res, const Tolerances& tol) {
    const BlockMeasure mu = block_measure_from_toeplitz(matrix_list_from_json(field(in, "blocks")), o.nodes, tol);
    res["nodes"] = mu.nodes;
    res["weights"] = matrix_list_to_json(mu.weights);
    res["residual"] = mu.residual;
    res["iterations"] = mu.iterations;
    return 0;
}

int cmd_member(const Options& o, const json& in, json& res, const Tolerances& tol) {
    const CMat x = operand(in, "X");
    MembershipVerdict v;
    if (o.set == "e21") {
        v = member_e21(x, tol);
    } else if (o.set == "shift") {
        v = member_shift_ball(x, o.nodes > 0 ? o.nodes : 64, tol);
    } else if (o.set == "normal") {
        v = member_normal(complex_list_from_json(field(in, "spectrum")), x, tol);
    } else {
        throw Error(ErrorKind::BadArgument, "--set must be e21, shift or normal");
    }
    res["set"] = o.set;
    res["member"] = v.member;
    res["margin"] = v.margin;
    res["unverified"] = v.unverified;
    if (v.witness_map) res["witness_map"] = map_json(*v.witness_map);
    if (!v.witness_weights.empty()) res["witness_weights"] = matrix_list_to_json(v.witness_weights);
    res["witness_residual"] = v.witness_residual;
    if (!v.note.empty()) res["note"] = v.note;
    return v.member ? 0 : 2;
}

int cmd_spatial(const Options& o, const json& in, json& res, const Tolerances& tol) {
    const std::vector<CMat> s = spatial_samples(operand(in), o.order, o.samples, o.seed);
    json radii = json::array();
    for (const CMat& m : s) radii.push_back(num_radius(m, tol));
    res["samples"] = matrix_list_to_json(s);
    res["radii"] = radii;
    return 0;
}

int cmd_smith_ward(const Options& o, const json& in, json& res, const Tolerances&) {
    const CMat t = operand(in);
    const SmithWard sw = smith_ward_nu(t, o.order);
    res["nu_lower"] = sw.nu_lower;
    res["op_norm"] = op_norm(t);
    res["compression"] = matrix_to_json(sw.compression);
    return 0;
}

int cmd_probe(const Options& o, const json& in, json& res, const Tolerances&) {
    const ProbeReport r = opsys_probe(matrix_from_json(field(in, "S")), matrix_from_json(field(in, "T")), o.order,
                                      o.samples, o.seed);
    json records = json::array();
    for (const ProbeRecord& p : r.records) records.push_back({{"norm_s", p.norm_s}, {"norm_t", p.norm_t}, {"gap", p.gap}});
    res["samples"] = r.samples;
    res["max_gap"] = r.max_gap;
    res["argmax"] = r.argmax;
    res["records"] = records;
    return 0;
}

int cmd_suite(const Options&, const json& in, json& res, const Tolerances& tol) {
    const EquivalenceReport r = equivalence_suite(operand(in), tol);
    res["radius"] = r.radius;
    res["conditions"] = r.conditions;
    res["notes"] = r.notes;
    res["all_agree"] = r.all_agree;
    return r.all_agree ? 0 : 2;
}

const std::map<std::string, std::pair<Handler, bool>>& commands() {
    // name -> (handler, needs input)
    static const std::map<std::string, std::pair<Handler, bool>> table{
        {"numrad", {cmd_numrad, true}},
        {"boundary", {cmd_boundary, true}},
        {"ando", {cmd_ando, true}},
        {"lmi", {cmd_lmi, true}},
        {"ucp-e21", {cmd_ucp_e21, true}},
        {"dilate2", {cmd_dilate2, true}},
        {"bilateral", {cmd_bilateral, false}},
        {"pdcheck", {cmd_pdcheck, true}},
        {"nilpotent-cond", {cmd_nilpotent_cond, true}},
        {"nilpotent-dilate", {cmd_nilpotent_dilate, true}},
        {"fejer-riesz", {cmd_fejer_riesz, true}},
        {"toeplitz-check", {cmd_toeplitz_check, true}},
        {"toeplitz-measure", {cmd_toeplitz_measure, true}},
        {"block-measure", {cmd_block_measure, true}},
        {"member", {cmd_member, true}},
        {"spatial", {cmd_spatial, true}},
        {"smith-ward", {cmd_smith_ward, true}},
        {"probe", {cmd_probe, true}},
        {"suite", {cmd_suite, true}},
    };
    return table;
}

json read_input(const Options& o) {
    std::stringstream buf;
    if (o.input.empty() || o.input == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream f(o.input);
        if (!f) throw Error(ErrorKind::BadJson, "cannot open " + o.input);
        buf << f.rdbuf();
    }
    try {
        return json::parse(buf.str());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::BadJson, e.what());
    }
}

Tolerances resolve_tolerances(const Options& o) {
    Tolerances tol;
    if (const char* env = std::getenv("MRANGE_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0') throw Error(ErrorKind::BadArgument, "MRANGE_TOL is not a number");
        tol.psd_eps = v;
    }
    if (o.tol) tol.psd_eps = *o.tol;
    if (o.grid > 0) tol.grid_angles = o.grid;
    tol.validate();
    return tol;
}

void emit(const Options& o, const json& doc, std::ostream& out) {
    const std::string text = doc.dump(2) + "\n";
    out << text;
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw Error(ErrorKind::BadArgument, "cannot write " + o.out);
        f << text;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Matricial range and dilation toolkit"};
    app.add_option("command", o.command, "command to run")->required();
    app.add_option("--input", o.input, "JSON input file (default: stdin)");
    app.add_option("--out", o.out, "also write the JSON result to this file");
    app.add_option("--tol", o.tol, "PSD tolerance psd_eps");
    app.add_option("--grid", o.grid, "angular grid size");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--order", o.order, "nilpotent order / compression size / probe size");
    app.add_option("--window", o.window, "dilation window M");
    app.add_option("--nodes", o.nodes, "measure or witness nodes");
    app.add_option("--set", o.set, "membership set: e21, shift or normal");
    app.add_option("--samples", o.samples, "sample count");
    app.add_option("--threads", o.threads, "worker threads (affects wall time only)");
    app.add_flag("--timing", o.timing, "add elapsed_ms to the output");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        emit(o, {{"error", {{"kind", "BadArgument"}, {"message", e.what()}}}}, out);
        return 1;
    }

    const auto start = std::chrono::steady_clock::now();
    json res;
    res["command"] = o.command;
    int code = 0;
    try {
        const auto it = commands().find(o.command);
        if (it == commands().end()) throw Error(ErrorKind::UnknownCommand, "unknown command " + o.command);
        const Tolerances tol = resolve_tolerances(o);
        set_default_tolerances(tol);
        const json in = it->second.second ? read_input(o) : json::object();
        code = it->second.first(o, in, res, tol);
    } catch (const Error& e) {
        res = {{"command", o.command}, {"error", {{"kind", std::string(e.name())}, {"message", e.what()}}}};
        code = 1;
    } catch (const std::exception& e) {
        res = {{"command", o.command}, {"error", {{"kind", "Internal"}, {"message", e.what()}}}};
        code = 1;
    }
    if (o.timing) {
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        res["elapsed_ms"] = ms;
    }
    try {
        emit(o, res, out);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 1;
    }
    return code;
}

}  // namespace mrange::cli
