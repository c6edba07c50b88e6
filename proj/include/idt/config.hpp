#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "idt/constructions.hpp"
#include "idt/fields.hpp"
#include "idt/kernels.hpp"
#include "idt/levy.hpp"
#include "idt/sheet.hpp"
#include "idt/suites.hpp"

namespace idt {

// Flat key = value configuration. Lines are `path.to.key = value`; `#` starts
// a comment; keys are case-sensitive. The full schema is documented in the
// README.
struct Config {
    std::map<std::string, std::string> kv;
    std::string raw_text;

    static Config parse_text(const std::string& text) {
        Config c;
        c.raw_text = text;
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r\n");
                if (a == std::string::npos) return std::string();
                const auto b = s.find_last_not_of(" \t\r\n");
                return s.substr(a, b - a + 1);
            };
            if (trim(line).empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
            c.kv[key] = val;
        }
        return c;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_text(ss.str());
    }

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    std::string get_string(const std::string& key) const {
        const auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("config: missing key '" + key + "'");
        return it->second;
    }
    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }
    double get_double(const std::string& key) const {
        const std::string s = get_string(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (...) {
            throw std::invalid_argument("config: key '" + key + "' is not a number: " + s);
        }
    }
    double get_double(const std::string& key, double fallback) const { return has(key) ? get_double(key) : fallback; }
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? std::uint64_t(std::stoull(get_string(key))) : fallback;
    }
    std::vector<double> get_list(const std::string& key) const {
        std::vector<double> out;
        std::istringstream ss(get_string(key));
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) out.push_back(std::stod(tok));
        if (out.empty()) throw std::invalid_argument("config: key '" + key + "' holds no numbers");
        return out;
    }

    // FNV-1a over the raw text; embedded in artifact headers for provenance.
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : raw_text) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    }
};

// --- spec resolution --------------------------------------------------------

// Levy model from keys under `prefix` (family plus family-specific numbers).
inline LevyModel model_from_config(const Config& c, const std::string& prefix) {
    const std::string fam = c.get_string(prefix + ".family");
    if (fam == "brownian_drift") return LevyModel::brownian(c.get_double(prefix + ".b", 0.0), c.get_double(prefix + ".sigma2", 1.0));
    if (fam == "poisson") return LevyModel::poisson_process(c.get_double(prefix + ".rate"), c.get_double(prefix + ".jump", 1.0));
    if (fam == "compound_poisson") {
        // atoms formatted size:prob,size:prob,...
        std::vector<JumpLawAtom> law;
        std::istringstream ss(c.get_string(prefix + ".atoms"));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("config: compound atoms need size:prob entries");
            law.push_back({std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))});
        }
        return LevyModel::compound_poisson(c.get_double(prefix + ".rate"), std::move(law));
    }
    if (fam == "gamma") return LevyModel::gamma_process(c.get_double(prefix + ".shape"), c.get_double(prefix + ".rate"));
    if (fam == "stable")
        return LevyModel::stable(c.get_double(prefix + ".alpha"), c.get_double(prefix + ".scale", 1.0),
                                 c.get_string(prefix + ".one_sided", "false") == "true");
    if (fam == "cauchy") return LevyModel::cauchy_process(c.get_double(prefix + ".scale", 1.0));
    throw std::invalid_argument("config: unknown model family '" + fam + "'");
}

inline CovKernel kernel_from_config(const Config& c, const std::string& prefix) {
    const std::string name = c.get_string(prefix + ".name");
    if (name == "brownian") return brownian_kernel();
    if (name == "fbm_rescaled") return fbm_rescaled_kernel(c.get_double(prefix + ".h"));
    if (name == "time_warp") return time_warp_kernel(c.get_double(prefix + ".alpha"));
    if (name == "product") return suites::product_kernel();
    throw std::invalid_argument("config: unknown kernel '" + name + "'");
}

// Measure from `<prefix>.atoms = loc:mass,...` and/or
// `<prefix>.pieces = lo:hi:level;...`.
inline MeasureHalfLine measure_from_config(const Config& c, const std::string& prefix) {
    MeasureHalfLine m;
    if (c.has(prefix + ".atoms")) {
        std::istringstream ss(c.get_string(prefix + ".atoms"));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("config: measure atoms need loc:mass entries");
            m.atoms.push_back({std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))});
        }
    }
    if (c.has(prefix + ".pieces")) {
        std::istringstream ss(c.get_string(prefix + ".pieces"));
        std::string tok;
        while (std::getline(ss, tok, ';')) {
            std::istringstream ts(tok);
            std::string a, b, l;
            if (!std::getline(ts, a, ':') || !std::getline(ts, b, ':') || !std::getline(ts, l, ':'))
                throw std::invalid_argument("config: measure pieces need lo:hi:level entries");
            m.pieces.push_back({std::stod(a), std::stod(b), std::stod(l)});
        }
    }
    m.validate();
    return m;
}

// One-parameter construction by variant name.
inline IdtPair idt_spec_from_config(const Config& c, const std::string& prefix) {
    const std::string variant = c.get_string(prefix + ".variant");
    if (variant == "sub_gaussian")
        return build_sub_gaussian(c.get_double(prefix + ".alpha"), kernel_from_config(c, prefix + ".kernel"));
    if (variant == "time_inversion")
        return build_time_inversion(c.get_double(prefix + ".alpha"), c.get_double(prefix + ".scale", 1.0));
    if (variant == "integral_phi") {
        TabulatedFn phi = c.has(prefix + ".phi_x")
                              ? TabulatedFn::from_points(c.get_list(prefix + ".phi_x"), c.get_list(prefix + ".phi_y"))
                              : TabulatedFn::constant(1.0);
        return build_integral_phi(phi);
    }
    if (variant == "integral_f_levy") {
        TabulatedFn f = c.has(prefix + ".f_x")
                            ? TabulatedFn::from_points(c.get_list(prefix + ".f_x"), c.get_list(prefix + ".f_y"))
                            : TabulatedFn::constant(1.0);
        return build_integral_f_levy(f, c.get_double(prefix + ".support", 1.0), model_from_config(c, prefix + ".model"));
    }
    if (variant == "measure_mix")
        return build_measure_mix(measure_from_config(c, prefix + ".measure"), model_from_config(c, prefix + ".model"));
    if (variant == "sato_mix")
        return build_sato_mix(measure_from_config(c, prefix + ".measure"), c.get_double(prefix + ".scale", 1.0));
    if (variant == "gaussian_mix") return build_gaussian_mix(measure_from_config(c, prefix + ".measure"));
    throw std::invalid_argument("config: unknown construction variant '" + variant + "'");
}

inline FieldSpec field_spec_from_config(const Config& c, const std::string& prefix) {
    const std::string kind = c.get_string(prefix + ".kind");
    const std::size_t dims = std::size_t(c.get_double(prefix + ".dims", 2));
    if (kind == "type1_product_stable") return FieldSpec::product_stable(c.get_double(prefix + ".alpha", 2.0), dims);
    if (kind == "brownian_sheet_field") return FieldSpec::brownian_sheet(dims);
    if (kind == "levy_param_bm") return FieldSpec::levy_bm(dims);
    if (kind == "type2_sum_levy") {
        std::vector<LevyModel> coords;
        for (std::size_t j = 0; j < dims; ++j) coords.push_back(model_from_config(c, prefix + ".coord" + std::to_string(j)));
        return FieldSpec::sum_levy(std::move(coords));
    }
    if (kind == "type1_from_idt") return FieldSpec::from_idt(idt_spec_from_config(c, prefix + ".inner").idt, dims);
    if (kind == "type2_projection")
        return FieldSpec::projection(idt_spec_from_config(c, prefix + ".inner").idt, c.get_list(prefix + ".weights"));
    throw std::invalid_argument("config: unknown field kind '" + kind + "'");
}

// --- CSV artifacts ----------------------------------------------------------

namespace detail {

inline std::string artifact_header(const Config& c, std::uint64_t seed) {
    std::ostringstream os;
    os << "# config-hash=" << std::hex << c.hash() << std::dec << " root-seed=" << seed << "\n";
    return os.str();
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace detail

inline void write_path_csv(std::ostream& out, const Config& c, const PathSample& p) {
    out << detail::artifact_header(c, p.seed);
    out << "time,value\n";
    for (std::size_t i = 0; i < p.times.size(); ++i)
        out << detail::fmt(p.times[i]) << "," << detail::fmt(p.values[i]) << "\n";
}

// Header row carries the t grid; one row per s value.
inline void write_sheet_csv(std::ostream& out, const Config& c, const SheetGrid& g) {
    out << detail::artifact_header(c, g.seed);
    out << "s";
    for (double t : g.t_times) out << "," << detail::fmt(t);
    out << "\n";
    for (std::size_t i = 0; i < g.s_times.size(); ++i) {
        out << detail::fmt(g.s_times[i]);
        for (std::size_t j = 0; j < g.t_times.size(); ++j) out << "," << detail::fmt(g.at(i, j));
        out << "\n";
    }
}

inline void write_matrix_csv(std::ostream& out, const Config& c, std::uint64_t seed,
                             const std::vector<std::string>& cols, const std::vector<double>& flat) {
    out << detail::artifact_header(c, seed);
    for (std::size_t j = 0; j < cols.size(); ++j) out << (j ? "," : "") << cols[j];
    out << "\n";
    const std::size_t rows = cols.empty() ? 0 : flat.size() / cols.size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < cols.size(); ++j) out << (j ? "," : "") << detail::fmt(flat[r * cols.size() + j]);
        out << "\n";
    }
}

// Points file / inline list: rows separated by ';', coordinates by ','.
inline std::vector<MultiIndex> points_from_string(const std::string& text) {
    std::vector<MultiIndex> pts;
    std::istringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        MultiIndex p;
        std::istringstream rs(row);
        std::string tok;
        while (std::getline(rs, tok, ','))
            if (tok.find_first_not_of(" \t") != std::string::npos) p.push_back(std::stod(tok));
        if (!p.empty()) pts.push_back(std::move(p));
    }
    if (pts.empty()) throw std::invalid_argument("config: empty point list");
    return pts;
}

}  // namespace idt
