#pragma once

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hirota/types.hpp"

namespace hirota {

using json = nlohmann::json;

// Interleaved re/im encoding shared by every complex array in the schema.
inline json interleave(const std::vector<cplx>& v) {
    json a = json::array();
    for (const auto& c : v) {
        a.push_back(c.real());
        a.push_back(c.imag());
    }
    return a;
}

inline std::vector<cplx> deinterleave(const json& a) {
    if (!a.is_array() || a.size() % 2 != 0)
        throw std::invalid_argument("json: complex array must interleave re/im pairs");
    std::vector<cplx> v(a.size() / 2);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = cplx(a[2 * i].get<double>(), a[2 * i + 1].get<double>());
    return v;
}

inline json to_json(const Potential& q, double t = 0.0) {
    return json{{"kind", "potential"},
                {"x0", q.x0},
                {"dx", q.dx},
                {"t", t},
                {"samples", interleave(q.samples)}};
}

inline Potential potential_from_json(const json& j) {
    if (j.value("kind", "") != "potential")
        throw std::invalid_argument("json: not a potential object");
    Potential q;
    q.x0 = j.at("x0").get<double>();
    q.dx = j.at("dx").get<double>();
    q.samples = deinterleave(j.at("samples"));
    if (q.samples.empty() || q.dx <= 0.0) throw std::invalid_argument("json: bad potential");
    return q;
}

inline json to_json(const ScatteringData& d) {
    json bs = json::array();
    for (const auto& b : d.bound_states)
        bs.push_back(json{{"z", {b.z.real(), b.z.imag()}}, {"c", {b.c.real(), b.c.imag()}}});
    return json{{"kind", "scattering_data"}, {"alpha", d.alpha}, {"beta", d.beta},
                {"zgrid", d.zgrid},          {"r", interleave(d.r)}, {"bound_states", bs}};
}

inline ScatteringData scattering_from_json(const json& j) {
    if (j.value("kind", "") != "scattering_data")
        throw std::invalid_argument("json: not a scattering_data object");
    ScatteringData d;
    d.alpha = j.at("alpha").get<double>();
    d.beta = j.at("beta").get<double>();
    d.zgrid = j.at("zgrid").get<std::vector<double>>();
    d.r = deinterleave(j.at("r"));
    for (const auto& b : j.at("bound_states")) {
        const auto z = b.at("z");
        const auto c = b.at("c");
        d.bound_states.push_back(
            {cplx(z[0].get<double>(), z[1].get<double>()),
             cplx(c[0].get<double>(), c[1].get<double>())});
    }
    d.validate();
    return d;
}

inline json to_json(const SolitonParams& p) {
    return json{{"kind", "soliton_params"}, {"eta", p.eta},     {"xi", p.xi},
                {"gamma", p.gamma},         {"alpha", p.alpha}, {"beta", p.beta},
                {"x_off", p.x_off}};
}

inline SolitonParams soliton_from_json(const json& j) {
    SolitonParams p;
    p.eta = j.at("eta").get<double>();
    p.xi = j.at("xi").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    p.x_off = j.value("x_off", 0.0);
    p.validate();
    return p;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

inline json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    json j;
    f >> j;
    return j;
}

/// CSV table of r(z): z, re, im, abs.
inline void write_reflection_csv(const std::string& path, const ScatteringData& d) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "z,re_r,im_r,abs_r\n" << std::setprecision(16);
    for (std::size_t i = 0; i < d.zgrid.size(); ++i)
        f << d.zgrid[i] << ',' << d.r[i].real() << ',' << d.r[i].imag() << ','
          << std::abs(d.r[i]) << "\n";
}

// ---------------------------------------------------------------------------
// Flat key = value config files ('#' comments, optional [section] lines that
// are ignored so TOML-style files parse).
// ---------------------------------------------------------------------------

class KeyValueConfig {
  public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot open config: " + path);
        KeyValueConfig c;
        std::string line;
        while (std::getline(f, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r\"");
                const auto b = s.find_last_not_of(" \t\r\"");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (!key.empty()) c.kv_[key] = val;
        }
        return c;
    }

    bool has(const std::string& k) const { return kv_.count(k) != 0; }

    double get_double(const std::string& k, double fallback) const {
        auto it = kv_.find(k);
        return it == kv_.end() ? fallback : std::stod(it->second);
    }
    long get_int(const std::string& k, long fallback) const {
        auto it = kv_.find(k);
        return it == kv_.end() ? fallback : std::stol(it->second);
    }
    std::string get_string(const std::string& k, const std::string& fallback) const {
        auto it = kv_.find(k);
        return it == kv_.end() ? fallback : it->second;
    }
    std::vector<double> get_list(const std::string& k) const {
        std::vector<double> out;
        auto it = kv_.find(k);
        if (it == kv_.end()) return out;
        std::string s = it->second;
        for (auto& ch : s)
            if (ch == ',' || ch == '[' || ch == ']') ch = ' ';
        std::istringstream is(s);
        double v;
        while (is >> v) out.push_back(v);
        return out;
    }
    const std::map<std::string, std::string>& raw() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

}  // namespace hirota
