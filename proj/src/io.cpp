#include "lpsw/io.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace lpsw {
namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'B', 'S', 'W', 'F'};

void check_target(const std::string& path, bool force) {
    if (!force && fs::exists(path))
        throw IoError("refusing to overwrite existing '" + path + "' (use --force)");
}

// write-to-temp + rename so readers never observe a partial file
class AtomicFile {
  public:
    AtomicFile(const std::string& path, bool force) : path_(path) {
        check_target(path, force);
        tmp_ = path + ".tmp";
        out_.open(tmp_, std::ios::binary | std::ios::trunc);
        if (!out_) throw IoError("cannot open '" + tmp_ + "' for writing");
    }
    std::ofstream& stream() { return out_; }
    void commit() {
        out_.flush();
        if (!out_) throw IoError("write failed for '" + tmp_ + "'");
        out_.close();
        fs::rename(tmp_, path_);
    }
    ~AtomicFile() {
        if (out_.is_open()) {
            out_.close();
            std::error_code ec;
            fs::remove(tmp_, ec);
        }
    }

  private:
    std::string path_, tmp_;
    std::ofstream out_;
};

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

void write_field(const Field& f, const std::string& path, bool force) {
    static_assert(std::endian::native == std::endian::little,
                  "BSWF container is little-endian; this build targets LE hosts");
    AtomicFile file(path, force);
    auto& out = file.stream();
    out.write(kMagic, 4);
    const std::uint32_t n = static_cast<std::uint32_t>(f.grid().n);
    const double L = f.grid().length;
    const std::uint32_t comps = static_cast<std::uint32_t>(f.components());
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&L), 8);
    out.write(reinterpret_cast<const char*>(&comps), 4);
    out.write(reinterpret_cast<const char*>(f.data().data()),
              static_cast<std::streamsize>(f.data().size() * sizeof(double)));
    file.commit();
}

Field read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open field file '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("'" + path + "' is not a BSWF field container");
    std::uint32_t n = 0, comps = 0;
    double L = 0.0;
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&L), 8);
    in.read(reinterpret_cast<char*>(&comps), 4);
    if (!in) throw IoError("truncated BSWF header in '" + path + "'");
    Field f(make_grid(static_cast<int>(n), L), static_cast<int>(comps));
    in.read(reinterpret_cast<char*>(f.data().data()),
            static_cast<std::streamsize>(f.data().size() * sizeof(double)));
    if (!in) throw IoError("truncated BSWF payload in '" + path + "'");
    return f;
}

void write_field_csv(const Field& f, const std::string& path, bool force) {
    AtomicFile file(path, force);
    auto& out = file.stream();
    out << "# BSWF-CSV n=" << f.grid().n << " L=" << std::hexfloat << f.grid().length
        << std::defaultfloat << " components=" << f.components() << "\n";
    out << "ix,iy";
    for (int c = 0; c < f.components(); ++c) out << ",c" << c;
    out << "\n";
    char buf[32];
    for (int ix = 0; ix < f.grid().n; ++ix)
        for (int iy = 0; iy < f.grid().n; ++iy) {
            out << ix << ',' << iy;
            for (int c = 0; c < f.components(); ++c) {
                std::snprintf(buf, sizeof buf, "%.17g", f.at(c, ix, iy));
                out << ',' << buf;
            }
            out << "\n";
        }
    file.commit();
}

Field read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open field CSV '" + path + "'");
    std::string header;
    std::getline(in, header);
    int n = 0, comps = 0;
    double L = 0.0;
    if (std::sscanf(header.c_str(), "# BSWF-CSV n=%d L=%la components=%d", &n, &L, &comps) != 3)
        throw IoError("bad field CSV header in '" + path + "'");
    Field f(make_grid(n, L), comps);
    std::string line;
    std::getline(in, line);  // column names
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const char* p = line.c_str();
        char* end = nullptr;
        const long ix = std::strtol(p, &end, 10);
        p = end + 1;
        const long iy = std::strtol(p, &end, 10);
        for (int c = 0; c < comps; ++c) {
            p = end + 1;
            f.at(c, static_cast<int>(ix), static_cast<int>(iy)) = std::strtod(p, &end);
        }
    }
    return f;
}

json encode_extended(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    return v;
}

double decode_extended(const json& v) {
    if (v.is_string()) {
        if (v == "inf") return kInf;
        if (v == "-inf") return -kInf;
        throw IoError("cannot decode numeric value " + v.dump());
    }
    return v.get<double>();
}

json to_json(const NormReport& r) {
    json blocks = json::array();
    for (const auto& [j, v] : r.per_block) blocks.push_back({{"j", j}, {"value", v}});
    return {{"params",
             {{"s", r.params.s}, {"p", encode_extended(r.params.p)}, {"r", encode_extended(r.params.r)}}},
            {"per_block", blocks},
            {"total", r.total}};
}

json to_json(const TrajectoryNorm& r) {
    json blocks = json::array();
    for (const auto& [j, v] : r.per_block_time) blocks.push_back({{"j", j}, {"value", v}});
    return {{"rho", encode_extended(r.rho)},
            {"params",
             {{"s", r.params.s}, {"p", encode_extended(r.params.p)}, {"r", encode_extended(r.params.r)}}},
            {"per_block_time", blocks},
            {"total", r.total}};
}

json to_json(const EstimateReport& r) {
    json params;
    for (const auto& [k, v] : r.params) params[k] = encode_extended(v);
    json samples = json::array();
    for (const auto& s : r.samples)
        samples.push_back(
            {{"trial", s.trial}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"ratio", s.ratio}});
    return {{"name", r.name},         {"trials", r.trials},   {"skipped", r.skipped},
            {"regenerated", r.regenerated}, {"worst_ratio", r.worst_ratio}, {"params", params},
            {"samples", samples}};
}

json to_json(const Calibration& c) {
    json csp;
    for (const auto& [k, v] : c.Csp) csp[k] = v;
    return {{"C0", c.C0},
            {"C_bony", c.C_bony},
            {"heat_C", c.heat_C},
            {"Csp", csp},
            {"provenance",
             {{"seed", c.seed},
              {"trials", c.trials},
              {"grid_n", c.grid_n},
              {"grid_length", c.grid_length}}}};
}

Calibration calibration_from_json(const json& j) {
    Calibration c;
    c.C0 = j.at("C0").get<double>();
    c.C_bony = j.at("C_bony").get<double>();
    c.heat_C = j.value("heat_C", 0.0);
    for (const auto& [k, v] : j.at("Csp").items()) c.Csp[k] = v.get<double>();
    if (j.contains("provenance")) {
        const auto& p = j["provenance"];
        c.seed = p.value("seed", 0ULL);
        c.trials = p.value("trials", 0);
        c.grid_n = p.value("grid_n", 0);
        c.grid_length = p.value("grid_length", 0.0);
    }
    return c;
}

Calibration load_calibration(const std::string& path) {
    const json j = load_json(path);
    return calibration_from_json(j.contains("body") ? j["body"] : j);
}

void save_calibration(const Calibration& cal, const std::string& path, bool force) {
    write_report(to_json(cal), "calibration", path, force);
}

json to_json(const IterationBudget& b) {
    return {{"E1", b.E1}, {"E2", b.E2}, {"T1", b.T1}, {"T2", b.T2}};
}

json to_json(const IterationReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.n},
                        {"u_linf_bs", row.u_linf_bs},
                        {"u_l2_bs1", row.u_l2_bs1},
                        {"h_linf_bs", row.h_linf_bs},
                        {"chi_member", row.chi_member},
                        {"delta", row.delta}});
    return {{"budget", to_json(r.budget)},
            {"T", r.T},
            {"dt", r.dt},
            {"iterates", rows},
            {"contraction_q", r.contraction_q},
            {"q_points", r.q_points},
            {"non_contraction", r.non_contraction},
            {"delta_floor", r.delta_floor},
            {"residual", r.residual},
            {"gap_u", r.gap_u},
            {"gap_h", r.gap_h},
            {"delta_last", r.delta_last}};
}

json to_json(const DirectResult& r) {
    json mass = json::array();
    for (const auto& [t, m] : r.mass_series) mass.push_back({{"t", t}, {"mass", m}});
    json out = {{"mass_series", mass},
                {"mass_drift_rel", r.mass_drift_rel},
                {"snapshots", r.u.snapshots.size()},
                {"dt", r.u.meta.dt}};
    if (r.regime_exit_time) out["regime_exit_time"] = *r.regime_exit_time;
    return out;
}

json to_json(const DivergenceReport& r) {
    json series = json::array();
    for (const auto& [t, g] : r.gap_series) series.push_back({{"t", t}, {"gap", g}});
    return {{"initial_gap", r.initial_gap},
            {"final_gap", r.final_gap},
            {"growth", r.growth},
            {"gap_series", series}};
}

json to_json(const GlobalReport& r) {
    json cps = json::array();
    for (const auto& cp : r.checkpoints)
        cps.push_back({{"t", cp.t},
                       {"u_bs", cp.u_bs},
                       {"h_bs", cp.h_bs},
                       {"u_hs1", cp.u_hs1},
                       {"u_l2t_hs1p1", cp.u_l2t_hs1p1},
                       {"sup_sum", cp.sup_sum}});
    return {{"horizon", r.horizon},
            {"dt", r.dt},
            {"s1", r.s1},
            {"rho2", r.rho2},
            {"checkpoints", cps},
            {"envelope_C", r.envelope_C},
            {"envelope_ok", r.envelope_ok},
            {"regime_exit", r.regime_exit},
            {"regime_exit_time", r.regime_exit_time},
            {"mass_drift_rel", r.mass_drift_rel}};
}

json to_json(const TransportEstimateReport& r) {
    json vs = json::array();
    for (const auto& [t, v] : r.V_series) vs.push_back({{"t", t}, {"V", v}});
    return {{"lhs", r.lhs},
            {"rhs", r.rhs},
            {"f0_norm", r.f0_norm},
            {"forcing_term", r.forcing_term},
            {"V_total", r.V_total},
            {"C0", r.C0},
            {"satisfied", r.satisfied},
            {"slack", r.slack},
            {"v_branch", r.v_branch},
            {"V_series", vs}};
}

void write_report(const json& body, const std::string& kind, const std::string& path, bool force) {
    json wrapped = {{"schema_version", kSchemaVersion},
                    {"kind", kind},
                    {"metadata", {{"timestamp", timestamp_now()}}},
                    {"body", body}};
    AtomicFile file(path, force);
    file.stream() << wrapped.dump(2) << "\n";
    file.commit();
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw IoError("JSON parse error in '" + path + "': " + e.what());
    }
    return j;
}

std::string canonical_dump(json report) {
    if (report.contains("metadata") && report["metadata"].contains("timestamp"))
        report["metadata"].erase("timestamp");
    return report.dump(2);
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows, bool force) {
    AtomicFile file(path, force);
    auto& out = file.stream();
    out << header << "\n";
    char buf[32];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i == 0 ? "" : ",") << buf;
        }
        out << "\n";
    }
    file.commit();
}

}  // namespace lpsw
