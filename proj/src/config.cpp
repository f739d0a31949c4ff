#include "qrsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qrsim {

using nlohmann::json;

double Topology::total_length_km() const {
    double d = 0;
    for (const auto& l : links) d += l.length_km;
    return d;
}

void Topology::validate() const {
    if (nodes.size() < 2) throw std::invalid_argument("topology: need at least 2 nodes");
    if (links.size() != nodes.size() - 1)
        throw std::invalid_argument("topology: a chain of N nodes has N-1 links");
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (links[i].left != i || links[i].right != i + 1)
            throw std::invalid_argument("topology: links must form the chain in node order");
        if (!(links[i].length_km > 0))
            throw std::invalid_argument("topology: link lengths must be positive");
    }
}

Topology Topology::chain(std::size_t n, double link_km) {
    Topology t;
    for (std::size_t i = 0; i < n; ++i) t.nodes.push_back("node" + std::to_string(i));
    for (std::size_t i = 0; i + 1 < n; ++i) t.links.push_back({i, i + 1, link_km});
    t.validate();
    return t;
}

void SimConfig::validate() const {
    topology.validate();
    hardware.validate();
    if (CssCode::by_name(protocol.code).n() != 7)
        throw std::invalid_argument("config: unsupported code");
    if (!(protocol.episode_timeout_s > 0))
        throw std::invalid_argument("config: episode_timeout_s must be positive");
    if (protocol.prep_retry_cap < 1)
        throw std::invalid_argument("config: prep_retry_cap must be at least 1");
    if (experiment.z && (*experiment.z < 0.0 || *experiment.z > 1.0))
        throw std::invalid_argument("config: z must be in [0,1]");
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
}

double get_num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw std::invalid_argument(std::string("config: ") + key +
                                                           " must be a number");
    return obj[key].get<double>();
}

}  // namespace

SimConfig load_config_text(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
    reject_unknown(doc, {"nodes", "links", "hardware", "protocol", "experiment"}, "top level");

    SimConfig cfg;

    if (!doc.contains("nodes") || !doc.contains("links"))
        throw std::invalid_argument("config: 'nodes' and 'links' are required");
    for (const auto& n : doc["nodes"]) {
        if (!n.is_string()) throw std::invalid_argument("config: node names must be strings");
        cfg.topology.nodes.push_back(n.get<std::string>());
    }
    auto node_index = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < cfg.topology.nodes.size(); ++i)
            if (cfg.topology.nodes[i] == name) return i;
        throw std::invalid_argument("config: link references unknown node '" + name + "'");
    };
    for (const auto& l : doc["links"]) {
        reject_unknown(l, {"left", "right", "length_km"}, "links[]");
        if (!l.contains("left") || !l.contains("right") || !l.contains("length_km"))
            throw std::invalid_argument("config: each link needs left, right, length_km");
        Topology::Link link;
        link.left = node_index(l["left"].get<std::string>());
        link.right = node_index(l["right"].get<std::string>());
        link.length_km = l["length_km"].get<double>();
        cfg.topology.links.push_back(link);
    }

    if (doc.contains("hardware")) {
        const json& h = doc["hardware"];
        reject_unknown(h,
                       {"F_1q", "F_2q", "F_m", "F_init", "F_phys", "T1_s", "T2_s", "eta_m",
                        "eta_d", "alpha_db_per_km", "c_star_m_per_s", "D_fwd_s", "D_end_s",
                        "t_prep_s", "bias"},
                       "hardware");
        HardwareProfile& p = cfg.hardware;
        p.f_1q = get_num(h, "F_1q", p.f_1q);
        p.f_2q = get_num(h, "F_2q", p.f_2q);
        p.f_meas = get_num(h, "F_m", p.f_meas);
        p.f_init = get_num(h, "F_init", p.f_init);
        p.f_phys = get_num(h, "F_phys", p.f_phys);
        p.t1 = get_num(h, "T1_s", p.t1);
        p.t2 = get_num(h, "T2_s", p.t2);
        p.eta_m = get_num(h, "eta_m", p.eta_m);
        p.eta_d = get_num(h, "eta_d", p.eta_d);
        p.alpha = get_num(h, "alpha_db_per_km", p.alpha);
        p.c_star = get_num(h, "c_star_m_per_s", p.c_star);
        p.d_fwd = get_num(h, "D_fwd_s", p.d_fwd);
        p.d_end = get_num(h, "D_end_s", p.d_end);
        p.t_prep = get_num(h, "t_prep_s", p.t_prep);
        if (h.contains("bias")) {
            const json& b = h["bias"];
            reject_unknown(b, {"w1", "w2", "correlated_factor"}, "hardware.bias");
            p.biased_gates = true;
            if (b.contains("w1")) {
                if (!b["w1"].is_array() || b["w1"].size() != 3)
                    throw std::invalid_argument("config: bias.w1 must be [wx, wy, wz]");
                for (int i = 0; i < 3; ++i) p.bias_1q[i] = b["w1"][i].get<double>();
            }
            if (b.contains("w2")) {
                if (!b["w2"].is_array() || b["w2"].size() != 3)
                    throw std::invalid_argument("config: bias.w2 must be [wx, wy, wz]");
                for (int i = 0; i < 3; ++i) p.bias_2q[i] = b["w2"][i].get<double>();
            }
            p.correlated_factor = get_num(b, "correlated_factor", p.correlated_factor);
        }
    }

    if (doc.contains("protocol")) {
        const json& pr = doc["protocol"];
        reject_unknown(pr, {"code", "ft_mode", "cec_mode", "episode_timeout_s", "prep_retry_cap"},
                       "protocol");
        if (pr.contains("code")) cfg.protocol.code = pr["code"].get<std::string>();
        if (pr.contains("ft_mode"))
            cfg.protocol.ft_mode = ft_mode_from_name(pr["ft_mode"].get<std::string>());
        if (pr.contains("cec_mode"))
            cfg.protocol.cec_mode = cec_mode_from_name(pr["cec_mode"].get<std::string>());
        cfg.protocol.episode_timeout_s =
            get_num(pr, "episode_timeout_s", cfg.protocol.episode_timeout_s);
        if (pr.contains("prep_retry_cap"))
            cfg.protocol.prep_retry_cap = pr["prep_retry_cap"].get<int>();
    }

    if (doc.contains("experiment")) {
        const json& e = doc["experiment"];
        reject_unknown(e, {"runs", "seed", "z"}, "experiment");
        if (e.contains("runs")) cfg.experiment.runs = e["runs"].get<std::uint64_t>();
        if (e.contains("seed")) cfg.experiment.seed = e["seed"].get<std::uint64_t>();
        if (e.contains("z")) cfg.experiment.z = e["z"].get<double>();
    }

    if (cfg.experiment.z) cfg.hardware = z_profile(*cfg.experiment.z, cfg.hardware);
    cfg.validate();
    return cfg;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str());
}

double classical_latency(const Topology& topo, std::size_t u, std::size_t v,
                         const HardwareProfile& p) {
    if (u == v || u >= topo.num_nodes() || v >= topo.num_nodes())
        throw std::invalid_argument("classical_latency: bad endpoints");
    std::size_t lo = std::min(u, v), hi = std::max(u, v);
    double d_m = 0;
    for (std::size_t i = lo; i < hi; ++i) d_m += topo.links[i].length_km * 1000.0;
    double hops = static_cast<double>(hi - lo);
    return d_m / p.c_star + hops * p.d_fwd + p.d_end;
}

HardwareProfile z_profile(double z, const HardwareProfile& baseline, double t_link_s) {
    if (z < 0.0 || z > 1.0) throw std::invalid_argument("z_profile: z must be in [0,1]");
    constexpr double kT2Cap = 199.99;
    HardwareProfile p = baseline;
    auto lift = [&](double f0) { return f0 + (1.0 - f0) * z; };
    p.f_1q = lift(baseline.f_1q);
    p.f_2q = lift(baseline.f_2q);
    p.f_meas = lift(baseline.f_meas);
    p.f_init = lift(baseline.f_init);
    p.f_phys = lift(baseline.f_phys);
    double pz0 = (1.0 - std::exp(-t_link_s / baseline.t2)) / 2.0;
    double pz = pz0 * (1.0 - z);
    double denom = std::log1p(-2.0 * pz);  // log(1 - 2 pz)
    double t2 = denom < 0.0 ? -t_link_s / denom : kT2Cap;
    p.t2 = std::min(t2, kT2Cap);
    return p;
}

double herald_success_prob(const HardwareProfile& p, double length_km) {
    if (!(length_km > 0)) throw std::invalid_argument("herald_success_prob: bad length");
    double eta_fiber = std::pow(10.0, -p.alpha * (length_km / 2.0) / 10.0);
    double arm = p.eta_m * p.eta_d * eta_fiber;
    return 0.5 * arm * arm;
}

double herald_attempt_period_s(const HardwareProfile& p, double length_km) {
    if (!(length_km > 0)) throw std::invalid_argument("herald_attempt_period_s: bad length");
    return 2.0 * (length_km * 1000.0 / p.c_star) + p.t_prep;
}

}  // namespace qrsim
