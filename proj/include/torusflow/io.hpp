#pragma once

// File formats:
//   state JSON          {"d": int, "modes": [{"k": [int...], "re": f, "im": f}, ...]}
//   density matrix JSON {"d": int, "entries": [{"k": [...], "j": [...], "re": f, "im": f}, ...]}
//                       one triangle (k >= j lexicographically); the rest by Hermitian symmetry
//   coefficient CSV     header "l_1,...,l_d,s,re,im", rows in lexicographic (l, s) order
//   bound report JSON   {"context", "lhs", "rhs", "ratio", "pass"}
//   sequence spec JSON  see sequence_spec_from_json
//   trend CSV           header "n,l_1,...,l_d,s,re,im"; summary JSON {"partialSums", "convergenceGap"}

#include "torusflow/density_matrix.hpp"
#include "torusflow/estimates.hpp"
#include "torusflow/experiments.hpp"
#include "torusflow/spectral_state.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

namespace torusflow::io {

using Json = nlohmann::json;

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("malformed JSON", line, col);
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes via a temporary sibling and rename, so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

template <class T>
T get_field(const Json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ParseError(std::string(where) + ": field \"" + key + "\" has the wrong type");
    }
}

inline Frequency frequency_from(const Json& j, int d, const char* where) {
    if (!j.is_array()) throw ParseError(std::string(where) + ": frequency must be an integer array");
    std::vector<std::int64_t> c;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw ParseError(std::string(where) + ": frequency must be an integer array");
        c.push_back(x.get<std::int64_t>());
    }
    if (static_cast<int>(c.size()) != d) {
        throw Error(std::string(where) + ": dimension mismatch, expected " + std::to_string(d) + " coordinates");
    }
    return Frequency(c);
}

inline Json frequency_json(const Frequency& k) { return Json(std::vector<std::int64_t>(k.coords().begin(), k.coords().end())); }

}  // namespace detail

// --- state ------------------------------------------------------------------

inline FourierState state_from_json(const Json& j) {
    const int d = detail::get_field<int>(j, "d", "state");
    const auto modes = detail::get_field<Json>(j, "modes", "state");
    if (!modes.is_array()) throw ParseError("state: \"modes\" must be an array");
    std::vector<std::pair<Frequency, Complex>> coeffs;
    for (const auto& m : modes) {
        const auto k = detail::frequency_from(detail::get_field<Json>(m, "k", "mode"), d, "mode");
        coeffs.emplace_back(k, Complex{detail::get_field<double>(m, "re", "mode"), detail::get_field<double>(m, "im", "mode")});
    }
    return make_state(d, coeffs);
}

inline Json state_to_json(const FourierState& u) {
    Json modes = Json::array();
    for (const auto& [k, a] : u.modes()) modes.push_back({{"k", detail::frequency_json(k)}, {"re", a.real()}, {"im", a.imag()}});
    return {{"d", u.dim()}, {"modes", modes}};
}

inline FourierState read_state(const std::filesystem::path& path) { return state_from_json(parse_json_text(read_file(path))); }

// --- density matrix -----------------------------------------------------------

inline DensityMatrix density_matrix_from_json(const Json& j) {
    const int d = detail::get_field<int>(j, "d", "density matrix");
    const auto entries = detail::get_field<Json>(j, "entries", "density matrix");
    if (!entries.is_array()) throw ParseError("density matrix: \"entries\" must be an array");
    DensityMatrix::Kernel kernel;
    for (const auto& e : entries) {
        const auto k = detail::frequency_from(detail::get_field<Json>(e, "k", "entry"), d, "entry");
        const auto jj = detail::frequency_from(detail::get_field<Json>(e, "j", "entry"), d, "entry");
        const Complex v{detail::get_field<double>(e, "re", "entry"), detail::get_field<double>(e, "im", "entry")};
        if (k < jj) throw ParseError("density matrix: entries must satisfy k >= j lexicographically");
        if (kernel.count({k, jj})) throw Error("density matrix: duplicate entry");
        if (k == jj && v.imag() != 0.0) throw Error("density matrix: diagonal entries must be real");
        kernel.emplace(KernelKey{k, jj}, v);
        if (k != jj) kernel.emplace(KernelKey{jj, k}, std::conj(v));
    }
    return DensityMatrix::from_kernel(d, std::move(kernel));
}

inline Json density_matrix_to_json(const DensityMatrix& rho) {
    Json entries = Json::array();
    for (const auto& [kj, v] : rho.kernel()) {
        if (kj.first < kj.second) continue;
        entries.push_back({{"k", detail::frequency_json(kj.first)},
                           {"j", detail::frequency_json(kj.second)},
                           {"re", v.real()},
                           {"im", v.imag()}});
    }
    return {{"d", rho.dim()}, {"entries", entries}};
}

// --- coefficient table CSV ------------------------------------------------------

inline std::string table_header(int d) {
    std::string h;
    for (int i = 1; i <= d; ++i) h += "l_" + std::to_string(i) + ",";
    return h + "s,re,im";
}

inline std::string table_to_csv(const CoefficientTable& t) {
    std::string out = table_header(t.dim()) + "\n";
    for (const auto& [key, v] : t.entries()) {
        for (auto c : key.l.coords()) out += std::to_string(c) + ",";
        out += std::to_string(key.s) + "," + format_double(v.real()) + "," + format_double(v.imag()) + "\n";
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline std::int64_t parse_int(const std::string& s, std::size_t line, std::size_t col) {
    try {
        std::size_t used = 0;
        const auto v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got \"" + s + "\"", line, col);
    }
}

inline double parse_real(const std::string& s, std::size_t line, std::size_t col) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw ParseError("expected a number, got \"" + s + "\"", line, col);
    return v;
}

}  // namespace detail

inline CoefficientTable table_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty coefficient table", 1, 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto head = detail::split_csv_line(line);
    const int d = static_cast<int>(head.size()) - 3;
    if (d < 1 || line != table_header(d)) throw ParseError("bad coefficient table header", 1, 1);
    CoefficientTable t(d);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != head.size()) throw ParseError("wrong number of columns", lineno, 1);
        std::vector<std::int64_t> l;
        for (int i = 0; i < d; ++i) l.push_back(detail::parse_int(cells[static_cast<std::size_t>(i)], lineno, static_cast<std::size_t>(i) + 1));
        const auto s = detail::parse_int(cells[static_cast<std::size_t>(d)], lineno, static_cast<std::size_t>(d) + 1);
        const Complex v{detail::parse_real(cells[static_cast<std::size_t>(d) + 1], lineno, static_cast<std::size_t>(d) + 2),
                        detail::parse_real(cells[static_cast<std::size_t>(d) + 2], lineno, static_cast<std::size_t>(d) + 3)};
        if (!t.entries().emplace(SpaceTime{Frequency(l), s}, v).second) throw ParseError("duplicate (l, s) row", lineno, 1);
    }
    return t;
}

// --- bound reports --------------------------------------------------------------

inline Json report_to_json(const BoundReport& r) {
    return {{"context", r.context}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio}, {"pass", r.pass}};
}

inline BoundReport report_from_json(const Json& j) {
    BoundReport r;
    r.context = detail::get_field<std::string>(j, "context", "report");
    r.lhs = detail::get_field<double>(j, "lhs", "report");
    r.rhs = detail::get_field<double>(j, "rhs", "report");
    r.ratio = detail::get_field<double>(j, "ratio", "report");
    r.pass = detail::get_field<bool>(j, "pass", "report");
    return r;
}

// --- sequences ------------------------------------------------------------------

/// {"kind": "modulated_wave", "first": 1, "last": 50,
///  "profile": <state>, "direction": [1, 0], "h": {"rule": "reciprocal", "scale": 1}}
/// {"kind": "sphere_eigenfunctions", "d": 2, "first": 1, "last": 50, "lambdas": [...] (default n^2),
///  "amplitudes": {"rule": "equal" | "random_phase", "seed": 7}, "h": {"rule": "inverse_sqrt_lambda"}}
/// {"kind": "custom_list", "first": 1, "states": [<state>...], "h": {"rule": "explicit", "values": [...]}}
inline SequenceSpec sequence_spec_from_json(const Json& j) {
    SequenceSpec spec;
    const auto kind = detail::get_field<std::string>(j, "kind", "sequence");
    spec.first = j.value("first", 1);
    if (kind == "modulated_wave") {
        spec.kind = SequenceKind::modulated_wave;
        spec.last = detail::get_field<int>(j, "last", "sequence");
        spec.profile = state_from_json(detail::get_field<Json>(j, "profile", "sequence"));
        spec.direction = detail::frequency_from(detail::get_field<Json>(j, "direction", "sequence"), spec.profile.dim(), "direction");
    } else if (kind == "sphere_eigenfunctions") {
        spec.kind = SequenceKind::sphere_eigenfunctions;
        spec.dim = detail::get_field<int>(j, "d", "sequence");
        spec.last = detail::get_field<int>(j, "last", "sequence");
        if (j.contains("lambdas")) spec.lambdas = detail::get_field<std::vector<std::int64_t>>(j, "lambdas", "sequence");
        if (j.contains("amplitudes")) {
            const auto& a = j.at("amplitudes");
            const auto rule = detail::get_field<std::string>(a, "rule", "amplitudes");
            if (rule == "equal") {
                spec.amplitudes.rule = AmplitudeRule::equal;
            } else if (rule == "random_phase") {
                spec.amplitudes.rule = AmplitudeRule::random_phase;
            } else {
                throw ParseError("amplitudes: unknown rule \"" + rule + "\"");
            }
            spec.amplitudes.seed = a.value("seed", std::uint64_t{0});
        }
        spec.h.kind = ScaleRule::Kind::inverse_sqrt_lambda;
    } else if (kind == "custom_list") {
        spec.kind = SequenceKind::custom_list;
        const auto states = detail::get_field<Json>(j, "states", "sequence");
        if (!states.is_array() || states.empty()) throw ParseError("sequence: \"states\" must be a nonempty array");
        for (const auto& s : states) spec.states.push_back(state_from_json(s));
        spec.last = spec.first + static_cast<int>(spec.states.size()) - 1;
        spec.h.kind = ScaleRule::Kind::explicit_values;
    } else {
        throw ParseError("sequence: unknown kind \"" + kind + "\"");
    }
    if (j.contains("h")) {
        const auto& h = j.at("h");
        const auto rule = detail::get_field<std::string>(h, "rule", "h");
        if (rule == "reciprocal") {
            spec.h.kind = ScaleRule::Kind::reciprocal_index;
        } else if (rule == "inverse_sqrt_lambda") {
            spec.h.kind = ScaleRule::Kind::inverse_sqrt_lambda;
        } else if (rule == "explicit") {
            spec.h.kind = ScaleRule::Kind::explicit_values;
            spec.h.values = detail::get_field<std::vector<double>>(h, "values", "h");
        } else {
            throw ParseError("h: unknown rule \"" + rule + "\"");
        }
        spec.h.scale = h.value("scale", 1.0);
    }
    return spec;
}

inline std::string trend_to_csv(const TrendReport& rep, int d) {
    std::string out = "n," + table_header(d) + "\n";
    for (int n : rep.indices) {
        for (const auto& [key, v] : rep.per_index.at(n).entries()) {
            out += std::to_string(n) + ",";
            for (auto c : key.l.coords()) out += std::to_string(c) + ",";
            out += std::to_string(key.s) + "," + format_double(v.real()) + "," + format_double(v.imag()) + "\n";
        }
    }
    return out;
}

inline Json trend_summary_json(const TrendReport& rep) {
    Json sums = Json::array();
    for (int n : rep.indices) sums.push_back({{"n", n}, {"values", rep.partial_sums.at(n)}});
    Json gaps = Json::array();
    for (const auto& [key, g] : rep.convergence_gap) gaps.push_back({{"l", detail::frequency_json(key.l)}, {"s", key.s}, {"gap", g}});
    return {{"window", {{"L", rep.L}, {"S", rep.S}}},
            {"qs", rep.qs},
            {"partialSums", sums},
            {"convergenceGap", gaps},
            {"maxConvergenceGap", rep.max_convergence_gap()}};
}

inline Json condition_s_json(const ConditionSReport& r) {
    return {{"deltas", r.deltas}, {"lowMass", r.low_proxy}, {"Rs", r.Rs},
            {"highMass", r.high_proxy}, {"maxNorm2", r.max_norm2}, {"consistent", r.consistent}};
}

}  // namespace torusflow::io
