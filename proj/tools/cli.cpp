#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "locc/bipartite.hpp"
#include "locc/error.hpp"
#include "locc/fourqubit.hpp"
#include "locc/oracle.hpp"
#include "locc/polytope.hpp"
#include "locc/schmidt.hpp"

namespace locc::cli {

namespace fq = locc::fourqubit;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json num(double x) { return std::isfinite(x) ? json(round12(x)) : json(nullptr); }

json num_vec(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

json num_vec(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
    return a;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(what + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw UsageError(what + ": empty list");
    return out;
}

SchmidtVector parse_schmidt(const std::string& text, const std::string& what) {
    return SchmidtVector::canonicalize(parse_list(text, what));
}

json load_json(const std::string& arg, const std::string& what) {
    std::string text = arg;
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw UsageError(what + ": cannot open " + arg.substr(1));
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(what + ": invalid JSON (" + std::string(e.what()) + ")");
    }
}

// ---- four-qubit payloads ----

fq::Complex complex_field(const json& j, const char* key) {
    if (!j.contains(key)) return {0.0, 0.0};
    const json& v = j.at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw UsageError(std::string("seed.") + key + " must be a number or [re, im]");
}

fq::FourQubitForm parse_state(const json& j) {
    if (!j.is_object() || !j.contains("seed") || !j.contains("gammas"))
        throw UsageError("state payload needs \"seed\" and \"gammas\"");
    const json& s = j.at("seed");
    if (!s.is_object() || !s.contains("a") || !s.at("a").is_number()) throw UsageError("seed.a must be a real number");
    fq::FourQubitForm f;
    f.seed.a = s.at("a").get<double>();
    f.seed.b = complex_field(s, "b");
    f.seed.c = complex_field(s, "c");
    f.seed.d = complex_field(s, "d");
    const json& g = j.at("gammas");
    if (!g.is_array() || g.size() != 4) throw UsageError("gammas must list four parties");
    for (std::size_t p = 0; p < 4; ++p) {
        if (!g[p].is_array() || g[p].size() != 3) throw UsageError("each gamma needs three components");
        for (std::size_t k = 0; k < 3; ++k) {
            if (!g[p][k].is_number()) throw UsageError("gamma components must be numbers");
            f.gammas[p][k] = g[p][k].get<double>();
        }
    }
    fq::validate_seed(f.seed);
    return f;
}

// Full precision so that feeding it back reproduces the same report.
json state_json(const fq::FourQubitForm& f) {
    json g = json::array();
    for (const auto& p : f.gammas) g.push_back({p[0], p[1], p[2]});
    return {{"seed",
             {{"a", f.seed.a},
              {"b", {f.seed.b.real(), f.seed.b.imag()}},
              {"c", {f.seed.c.real(), f.seed.c.imag()}},
              {"d", {f.seed.d.real(), f.seed.d.imag()}}}},
            {"gammas", g}};
}

json matrix_json(const fq::Mat2& m) {
    json rows = json::array();
    for (int r = 0; r < 2; ++r) {
        json row = json::array();
        for (int c = 0; c < 2; ++c) row.push_back({num(m(r, c).real()), num(m(r, c).imag())});
        rows.push_back(row);
    }
    return rows;
}

// ---- output ----

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;
};

std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return fmt12(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string render_csv(const Table& t) {
    std::string out;
    const auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += csv_field(fields[i]);
        }
        out += "\r\n";
    };
    line(t.header);
    for (const auto& r : t.rows) {
        std::vector<std::string> fields;
        for (const auto& v : r) fields.push_back(cell(v));
        line(fields);
    }
    return out;
}

std::string render_json_table(const Table& t) {
    json arr = json::array();
    for (const auto& r : t.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) o[t.header[i]] = r[i];
        arr.push_back(o);
    }
    return arr.dump(2) + "\n";
}

Table flatten(const json& report) {
    Table t;
    std::vector<json> row;
    for (const auto& [key, value] : report.items()) {
        if (value.is_structured()) continue;
        t.header.push_back(key);
        row.push_back(value);
    }
    t.rows.push_back(row);
    return t;
}

struct Common {
    std::string format;
    bool json_flag = false;
    bool csv_flag = false;
    std::string output;

    std::string resolved(const std::string& fallback) const {
        if (json_flag) return "json";
        if (csv_flag) return "csv";
        return format.empty() ? fallback : format;
    }
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app->add_flag("--json", c.json_flag, "Shorthand for --format json");
    app->add_flag("--csv", c.csv_flag, "Shorthand for --format csv");
    app->add_option("-o,--output", c.output, "Write the report to a file instead of stdout");
}

void emit(const std::string& text, const Common& c, std::ostream& out) {
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.output);
    f << text;
}

void emit_report(const json& report, const Common& c, std::ostream& out) {
    emit(c.resolved("json") == "csv" ? render_csv(flatten(report)) : report.dump(2) + "\n", c, out);
}

void emit_table(const Table& t, const Common& c, std::ostream& out) {
    emit(c.resolved("csv") == "json" ? render_json_table(t) : render_csv(t), c, out);
}

// ---- Monte-Carlo settings ----

struct McOptions {
    std::uint64_t samples = 0;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string convention = "intrinsic";
};

void add_mc(CLI::App* app, McOptions& m, std::uint64_t default_samples, const std::string& prefix) {
    m.samples = default_samples;
    app->add_option("--" + prefix + "samples", m.samples, "Monte-Carlo sample count")->capture_default_str();
    app->add_option("--" + prefix + "seed", m.seed, "Monte-Carlo seed (default: $" + std::string(kSeedEnv) + " or built-in)");
    app->add_option("--threads", m.threads, "Worker threads (0: all cores)");
}

McConfig mc_config(const McOptions& m) {
    McConfig cfg;
    cfg.samples = m.samples;
    cfg.threads = m.threads;
    cfg.convention = m.convention == "projected" ? Convention::Projected : Convention::Intrinsic;
    if (m.seed) {
        cfg.seed = *m.seed;
    } else if (const char* env = std::getenv(kSeedEnv); env && *env) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 0);
        if (*end != '\0') throw UsageError(std::string(kSeedEnv) + " is not an integer: " + env);
        cfg.seed = v;
    }
    return cfg;
}

json mc_json(const McEstimate& e) {
    return {{"estimate", num(e.estimate)},
            {"std_error", num(e.std_error)},
            {"hits", e.hits},
            {"samples", e.samples},
            {"seed", e.seed}};
}

// ---- bipartite ----

json source_report(const SchmidtVector& l, std::optional<int> k) {
    const MeasureReport r = k && *k != l.dim() ? source_entanglement_k(l, *k) : source_entanglement(l);
    json j{{"quantity", "source"},
           {"schmidt", num_vec(l.vec())},
           {"k", r.family_k},
           {"E_s", num(r.entanglement)},
           {"V_s", num(r.volume)},
           {"dimension", r.dimension},
           {"V_s_sup", num(r.sup)},
           {"frame", to_string(r.frame)}};
    if (!r.sup_symbolic.empty()) j["V_s_sup_symbolic"] = r.sup_symbolic;
    return j;
}

json accessible_report(const SchmidtVector& l, std::optional<int> k, bool with_vertices) {
    const int level = k.value_or(l.dim());
    const MeasureReport r = accessible_entanglement_k(l, level);
    const auto geo = accessible_geometry(l, level);
    json j{{"quantity", "accessible"},
           {"schmidt", num_vec(l.vec())},
           {"k", r.family_k},
           {"E_a", num(r.entanglement)},
           {"V_a", num(r.volume)},
           {"dimension", r.dimension},
           {"V_a_sup", num(r.sup)},
           {"V_a_sup_symbolic", r.sup_symbolic},
           {"frame", to_string(r.frame)},
           {"vertex_count", geo.vertices.size()}};
    if (geo.projected.dimension >= 1)
        j["simple"] = is_simple(geo.vertices, vertex_adjacency(geo.hrep, geo.vertices));
    if (with_vertices) {
        json vs = json::array();
        for (const auto& v : geo.vertices.vertices) {
            Eigen::VectorXd full = Eigen::VectorXd::Zero(l.dim());
            full.head(level) = lift(v);
            vs.push_back(num_vec(full));
        }
        j["vertices"] = vs;
    }
    return j;
}

std::vector<double> interpolate(const std::vector<double>& a, const std::vector<double>& b, double t) {
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = i < a.size() ? a[i] : 0.0;
        const double y = i < b.size() ? b[i] : 0.0;
        out[i] = (1.0 - t) * x + t * y;
    }
    return out;
}

double sweep_param(int i, int steps, double from, double to) {
    if (steps == 1) return from;
    if (i == steps - 1) return to;
    return from + (to - from) * static_cast<double>(i) / (steps - 1);
}

Table bipartite_sweep(const std::string& from, const std::string& to, int steps) {
    if (steps < 1) throw UsageError("--steps must be at least 1");
    const auto a = parse_list(from, "--from");
    const auto b = parse_list(to, "--to");
    const std::size_t d = std::max(a.size(), b.size());
    Table t;
    t.header.push_back("t");
    for (std::size_t i = 1; i <= d; ++i) t.header.push_back("lambda_" + std::to_string(i));
    for (const char* h : {"V_s", "V_a", "E_s", "E_a", "accessible_vertices", "source_vertices"}) t.header.push_back(h);
    for (int i = 0; i < steps; ++i) {
        const double s = sweep_param(i, steps, 0.0, 1.0);
        const auto l = SchmidtVector::canonicalize(interpolate(a, b, s));
        const auto src = source_entanglement(l);
        const auto acc = accessible_entanglement(l);
        const auto geo = accessible_geometry(l, l.dim());
        std::vector<json> row{num(s)};
        for (double x : l.vec()) row.push_back(num(x));
        row.push_back(num(src.volume));
        row.push_back(num(acc.volume));
        row.push_back(num(src.entanglement));
        row.push_back(num(acc.entanglement));
        row.push_back(geo.vertices.size());
        row.push_back(source_polytope_vertices(l).size());
        t.rows.push_back(row);
    }
    return t;
}

// ---- four-qubit ----

json classify_report(const fq::FourQubitForm& f) {
    const auto c = fq::classify(fq::standard_form(f));
    json slots = json::array();
    for (int s : c.slots) slots.push_back(s + 1);
    json j{{"structure", fq::to_string(c.tag)},
           {"parties", slots},
           {"standard_form", state_json(c)},
           {"diagnostics", c.diagnostics}};
    j["axis"] = c.axis ? json(fq::to_string(*c.axis)) : json(nullptr);
    if (c.second_axis) j["second_axis"] = fq::to_string(*c.second_axis);
    return j;
}

json measures_report(const fq::FourQubitForm& f, const McConfig& cfg) {
    const auto c = fq::classify(fq::standard_form(f));
    const auto m = fq::entanglement_4q(c, cfg);
    json j{{"structure", fq::to_string(c.tag)},
           {"E_s", num(m.source.entanglement)},
           {"V_s", num(m.source.volume)},
           {"V_s_dimension", m.source.dimension},
           {"V_s_sup", num(m.source.sup)},
           {"V_s_sup_symbolic", m.source.sup_symbolic},
           {"E_a", num(m.accessible.entanglement)},
           {"V_a", num(m.accessible.volume)},
           {"V_a_dimension", m.accessible.dimension},
           {"V_a_sup", num(m.accessible.sup)},
           {"V_a_sup_symbolic", m.accessible.sup_symbolic},
           {"state", state_json(f)}};
    if (c.tag == fq::Structure::Seed) j["V_a_symbolic"] = "29π/12";
    if (m.accessible.std_error) {
        j["V_a_std_error"] = num(*m.accessible.std_error);
        j["mc_samples"] = cfg.samples;
        j["mc_seed"] = cfg.seed;
    }
    return j;
}

json witness_report(const fq::PovmWitness& w) {
    json outcomes = json::array();
    for (const auto& o : w.outcomes) {
        json ops = json::array();
        for (const auto& m : o.op) ops.push_back(matrix_json(m));
        outcomes.push_back({{"weight", num(o.weight)}, {"probability", num(o.probability)}, {"operators", ops}});
    }
    json steps = json::array();
    for (const auto& s : w.steps) {
        steps.push_back({{"party", s.party + 1},
                         {"eta", num_vec(std::vector<double>(s.eta.begin(), s.eta.end()))},
                         {"gamma", num_vec(std::vector<double>(s.gamma.begin(), s.gamma.end()))},
                         {"zeta", num_vec(std::vector<double>(s.zeta.begin(), s.zeta.end()))}});
    }
    return {{"row", fq::to_string(w.row)},
            {"outcomes", outcomes},
            {"steps", steps},
            {"completeness_error", num(w.completeness_error)},
            {"bloch_error", num(w.bloch_error)},
            {"state_error", num(w.state_error)}};
}

Table fourqubit_sweep(const fq::FourQubitForm& base, int party, const std::string& component, double from, double to,
                      int steps, const McConfig& cfg) {
    if (steps < 1) throw UsageError("--steps must be at least 1");
    if (party < 1 || party > 4) throw UsageError("--party must be 1..4");
    const auto axis = fq::axis_from_string(component);
    if (!axis) throw UsageError("--component must be x, y or z");
    Table t;
    t.header = {"gamma", "structure", "V_s", "V_a", "E_s", "E_a", "V_s_dimension", "V_a_dimension", "V_a_std_error"};
    for (int i = 0; i < steps; ++i) {
        fq::FourQubitForm f = base;
        const double g = sweep_param(i, steps, from, to);
        f.gammas[static_cast<std::size_t>(party - 1)][static_cast<std::size_t>(*axis)] = g;
        const auto c = fq::classify(fq::standard_form(f));
        const auto m = fq::entanglement_4q(c, cfg);
        t.rows.push_back({num(g), fq::to_string(c.tag), num(m.source.volume), num(m.accessible.volume),
                          num(m.source.entanglement), num(m.accessible.entanglement), m.source.dimension,
                          m.accessible.dimension, m.accessible.std_error ? num(*m.accessible.std_error) : json(nullptr)});
    }
    return t;
}

// ---- polytope ----

HalfspaceSystem parse_hrep(const json& j) {
    if (!j.is_object() || !j.contains("A") || !j.contains("b")) throw UsageError("H-representation needs \"A\" and \"b\"");
    const json& a = j.at("A");
    const json& b = j.at("b");
    if (!a.is_array() || !b.is_array() || a.size() != b.size() || a.empty())
        throw UsageError("A and b must be non-empty with matching row counts");
    const std::size_t cols = a[0].size();
    HalfspaceSystem h{Eigen::MatrixXd(a.size(), cols), Eigen::VectorXd(b.size())};
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (!a[r].is_array() || a[r].size() != cols) throw UsageError("ragged A matrix");
        for (std::size_t c = 0; c < cols; ++c) h.A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a[r][c].get<double>();
        h.b(static_cast<Eigen::Index>(r)) = b[r].get<double>();
    }
    return h;
}

std::vector<Eigen::VectorXd> parse_vrep(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.at("vertices").is_array() || j.at("vertices").empty())
        throw UsageError("V-representation needs a non-empty \"vertices\" array");
    std::vector<Eigen::VectorXd> pts;
    const std::size_t n = j.at("vertices")[0].size();
    for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != n) throw UsageError("vertices must share one length");
        Eigen::VectorXd p(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) p(static_cast<Eigen::Index>(i)) = v[i].get<double>();
        pts.push_back(p);
    }
    return pts;
}

struct PolytopeInput {
    HalfspaceSystem h;
    VertexSet v;
};

PolytopeInput polytope_input(const std::string& hrep, const std::string& vrep) {
    if (hrep.empty() == vrep.empty()) throw UsageError("give exactly one of --hrep or --vrep");
    if (!hrep.empty()) {
        PolytopeInput in{parse_hrep(load_json(hrep, "--hrep")), {}};
        in.v = enumerate_vertices(in.h);
        return in;
    }
    const auto pts = parse_vrep(load_json(vrep, "--vrep"));
    PolytopeInput in{hull_halfspaces(pts), {}};
    in.v = with_tight_sets(in.h, pts);
    // Points that are not vertices of the hull have rank-deficient tight rows.
    std::vector<Eigen::VectorXd> kept;
    for (int i = 0; i < in.v.size(); ++i) {
        const auto& tight = in.v.tight_sets[static_cast<std::size_t>(i)];
        Eigen::MatrixXd rows(static_cast<Eigen::Index>(tight.size()), in.h.dim());
        for (std::size_t r = 0; r < tight.size(); ++r) rows.row(static_cast<Eigen::Index>(r)) = in.h.A.row(tight[r]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
        lu.setThreshold(1e-9);
        if (!tight.empty() && lu.rank() == in.h.dim()) kept.push_back(in.v.vertices[static_cast<std::size_t>(i)]);
    }
    in.v = with_tight_sets(in.h, kept);
    return in;
}

json polytope_report(const PolytopeInput& in, bool volume) {
    json j{{"vertex_count", in.v.size()}, {"dimension", affine_dimension(in.v.vertices)}};
    const auto adj = vertex_adjacency(in.h, in.v);
    const bool simple = is_simple(in.v, adj);
    j["simple"] = simple;
    if (!volume) {
        json vs = json::array();
        for (int i = 0; i < in.v.size(); ++i)
            vs.push_back({{"vertex", num_vec(in.v.vertices[static_cast<std::size_t>(i)])},
                          {"tight", in.v.tight_sets[static_cast<std::size_t>(i)]},
                          {"neighbors", adj[static_cast<std::size_t>(i)]}});
        j["vertices"] = vs;
        return j;
    }
    const auto tri = volume_triangulation(in.h, in.v);
    j["volume"] = num(tri.volume);
    j["degenerate"] = tri.degenerate;
    j["simplices"] = triangulation_size(in.h, in.v);
    if (simple && tri.dimension >= 1)
        j["brion_volume"] = num(brion_volume(in.v, adj, EmbeddingFrame{tri.dimension, Convention::Intrinsic}));
    return j;
}

// ---- oracle ----

json oracle_region(const std::string& region, const std::string& gamma, const McConfig& cfg) {
    const Box box{Eigen::Vector3d::Constant(-0.5), Eigen::Vector3d::Constant(0.5)};
    McEstimate e;
    json j{{"region", region}};
    if (region == "ball") {
        e = mc_region_volume([](const Eigen::VectorXd& z) { return z.squaredNorm() < 0.25; }, box, cfg);
        j["closed_form"] = num(kPi / 6.0);
    } else if (region == "half-ball") {
        e = mc_region_volume([](const Eigen::VectorXd& z) { return z.squaredNorm() < 0.25 && z(0) > 0.0; }, box, cfg);
        j["closed_form"] = num(kPi / 12.0);
    } else if (region == "caseiii") {
        if (gamma.empty()) throw UsageError("--gamma is required for the caseiii region");
        const auto g = parse_list(gamma, "--gamma");
        if (g.size() != 3) throw UsageError("--gamma needs three components");
        const fq::ParamVector gv{g[0], g[1], g[2]};
        e = mc_region_volume([&](const Eigen::VectorXd& z) { return fq::caseiii_accessible(gv, z); }, box, cfg);
        e.estimate *= 0.5;
        e.std_error *= 0.5;
        j["gamma"] = num_vec(g);
    } else {
        throw UsageError("unknown region " + region);
    }
    j.update(mc_json(e));
    return j;
}

}  // namespace

double round12(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(fmt12(x).c_str(), nullptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"LOCC convertibility and entanglement volumes", "locc"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Common common;
    std::string schmidt, from, to, state, hrep, vrep, region, gamma, component = "x";
    std::optional<int> k;
    int steps = 11, party = 1;
    double gfrom = 0.0, gto = 0.0;
    bool with_vertices = false;
    McOptions mc4, mco;
    std::function<void()> action;

    auto* bip = app.add_subcommand("bipartite", "Bipartite Schmidt-vector measures")->require_subcommand(1);
    {
        auto* c = bip->add_subcommand("source", "Source volume and entanglement");
        c->add_option("--schmidt", schmidt, "Comma-separated Schmidt coefficients")->required();
        c->add_option("--k", k, "Embedding dimension (k >= d)");
        add_common(c, common);
        c->callback([&] { action = [&] { emit_report(source_report(parse_schmidt(schmidt, "--schmidt"), k), common, out); }; });

        c = bip->add_subcommand("accessible", "Accessible volume and entanglement");
        c->add_option("--schmidt", schmidt, "Comma-separated Schmidt coefficients")->required();
        c->add_option("--k", k, "Restrict to at most k nonzero coefficients (2 <= k <= d)");
        c->add_flag("--vertices", with_vertices, "Include the vertex list");
        add_common(c, common);
        c->callback([&] {
            action = [&] { emit_report(accessible_report(parse_schmidt(schmidt, "--schmidt"), k, with_vertices), common, out); };
        });

        c = bip->add_subcommand("convert", "Deterministic LOCC convertibility");
        c->add_option("--from", from, "Initial Schmidt coefficients")->required();
        c->add_option("--to", to, "Target Schmidt coefficients")->required();
        add_common(c, common);
        c->callback([&] {
            action = [&] {
                auto a = parse_schmidt(from, "--from");
                auto b = parse_schmidt(to, "--to");
                const int d = std::max(a.dim(), b.dim());
                a = embed(a, d);
                b = embed(b, d);
                emit_report({{"convertible", majorizes(b, a)}, {"from", num_vec(a.vec())}, {"to", num_vec(b.vec())}}, common,
                            out);
            };
        });

        c = bip->add_subcommand("sweep", "Measures along the segment between two Schmidt vectors");
        c->add_option("--from", from, "Start Schmidt coefficients")->required();
        c->add_option("--to", to, "End Schmidt coefficients")->required();
        c->add_option("--steps", steps, "Grid points including both ends")->capture_default_str();
        add_common(c, common);
        c->callback([&] { action = [&] { emit_table(bipartite_sweep(from, to, steps), common, out); }; });
    }

    auto* four = app.add_subcommand("fourqubit", "Generic four-qubit states")->require_subcommand(1);
    {
        const std::string payload_help = "State JSON, inline or @file";
        auto* c = four->add_subcommand("classify", "Standard form and structure");
        c->add_option("--state", state, payload_help)->required();
        add_common(c, common);
        c->callback([&] { action = [&] { emit_report(classify_report(parse_state(load_json(state, "--state"))), common, out); }; });

        c = four->add_subcommand("convert", "LOCC convertibility between two states");
        c->add_option("--from", from, payload_help)->required();
        c->add_option("--to", to, payload_help)->required();
        add_common(c, common);
        c->callback([&] {
            action = [&] {
                const auto a = parse_state(load_json(from, "--from"));
                const auto b = parse_state(load_json(to, "--to"));
                const auto v = fq::can_convert(a, b);
                json j{{"convertible", v.possible}, {"row", v.row ? json(fq::to_string(*v.row)) : json(nullptr)}};
                if (!v.reason.empty()) j["reason"] = v.reason;
                emit_report(j, common, out);
            };
        });

        c = four->add_subcommand("measures", "Source and accessible volumes and measures");
        c->add_option("--state", state, payload_help)->required();
        add_mc(c, mc4, fq::kDefaultCaseIIISamples, "mc-");
        add_common(c, common);
        c->callback([&] {
            action = [&] { emit_report(measures_report(parse_state(load_json(state, "--state")), mc_config(mc4)), common, out); };
        });

        c = four->add_subcommand("witness", "Explicit POVM implementing a conversion");
        c->add_option("--from", from, payload_help)->required();
        c->add_option("--to", to, payload_help)->required();
        add_common(c, common);
        c->callback([&] {
            action = [&] {
                const auto w = fq::povm_witness(parse_state(load_json(from, "--from")), parse_state(load_json(to, "--to")));
                emit_report(witness_report(w), common, out);
            };
        });

        c = four->add_subcommand("sweep", "Measures while one parameter varies");
        c->add_option("--state", state, payload_help)->required();
        c->add_option("--party", party, "Party 1..4")->capture_default_str();
        c->add_option("--component", component, "x, y or z")->capture_default_str();
        c->add_option("--from", gfrom, "Start value")->required();
        c->add_option("--to", gto, "End value")->required();
        c->add_option("--steps", steps, "Grid points including both ends")->capture_default_str();
        add_mc(c, mc4, fq::kDefaultCaseIIISamples, "mc-");
        add_common(c, common);
        c->callback([&] {
            action = [&] {
                emit_table(fourqubit_sweep(parse_state(load_json(state, "--state")), party, component, gfrom, gto, steps,
                                           mc_config(mc4)),
                           common, out);
            };
        });
    }

    auto* poly = app.add_subcommand("polytope", "Generic polytope engine")->require_subcommand(1);
    for (const bool volume : {false, true}) {
        auto* c = poly->add_subcommand(volume ? "volume" : "vertices", volume ? "Volume by triangulation and Brion's formula"
                                                                              : "Vertices, tight rows and neighbours");
        c->add_option("--hrep", hrep, "{\"A\": [[...]], \"b\": [...]}, inline or @file");
        c->add_option("--vrep", vrep, "{\"vertices\": [[...]]}, inline or @file");
        add_common(c, common);
        c->callback([&, volume] { action = [&, volume] { emit_report(polytope_report(polytope_input(hrep, vrep), volume), common, out); }; });
    }

    auto* orc = app.add_subcommand("oracle", "Monte-Carlo cross-checks")->require_subcommand(1);
    {
        for (const bool source : {true, false}) {
            auto* c = orc->add_subcommand(source ? "source" : "accessible",
                                          source ? "Monte-Carlo source volume" : "Monte-Carlo accessible volume");
            c->add_option("--schmidt", schmidt, "Comma-separated Schmidt coefficients")->required();
            add_mc(c, mco, 1'000'000, "");
            c->add_option("--convention", mco.convention, "Volume convention")
                ->check(CLI::IsMember({"intrinsic", "projected"}))
                ->capture_default_str();
            add_common(c, common);
            c->callback([&, source] {
                action = [&, source] {
                    const auto l = parse_schmidt(schmidt, "--schmidt");
                    const auto cfg = mc_config(mco);
                    const auto e = source ? mc_source_volume(l, cfg) : mc_accessible_volume(l, cfg);
                    const double intrinsic = source ? source_volume(l) : accessible_volume(l).volume;
                    const double closed = convert_frame(intrinsic, EmbeddingFrame{l.dim(), Convention::Intrinsic}, cfg.convention);
                    json j{{"quantity", source ? "source" : "accessible"},
                           {"schmidt", num_vec(l.vec())},
                           {"convention", mco.convention},
                           {"closed_form", num(closed)}};
                    j.update(mc_json(e));
                    emit_report(j, common, out);
                };
            });
        }
        auto* c = orc->add_subcommand("region", "Monte-Carlo volume of a named region in [-1/2, 1/2]^3");
        c->add_option("--region", region, "ball, half-ball or caseiii")->required()->check(CLI::IsMember({"ball", "half-ball", "caseiii"}));
        c->add_option("--gamma", gamma, "CaseIII parameters g1,g2,g3");
        add_mc(c, mco, 1'000'000, "");
        add_common(c, common);
        c->callback([&] { action = [&] { emit_report(oracle_region(region, gamma, mc_config(mco)), common, out); }; });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (!action) {
        err << "usage error: no command given\n";
        return kExitUsage;
    }
    try {
        action();
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << json{{"error", {{"code", e.code()}, {"message", e.what()}}}}.dump() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}

}  // namespace locc::cli
