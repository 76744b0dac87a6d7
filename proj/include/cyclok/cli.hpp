#pragma once
// Command-line front end.  run() is the whole program; tools/cyclok_main.cpp only forwards argv.
// Exit codes: 0 ok, 1 usage, 2 out of scope, 3 internal consistency failure.

#include "manifoldset.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cyclok {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kCacheSchema = 1;
inline constexpr const char* kCacheEnv = "CYCLOK_CACHE";

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- JSON encoding

// integers that fit in int64 are numbers, the rest decimal strings
inline json int_json(const Int& x) {
    if (x.fits_slong_p()) return static_cast<long long>(x.get_si());
    return x.get_str();
}

inline Int int_from_json(const json& j) {
    if (j.is_string()) return Int(j.get<std::string>());
    if (j.is_number_unsigned()) return from_u64(j.get<u64>());
    return Int(static_cast<long>(j.get<long long>()));
}

inline json group_json(const FinAbGroup& g) {
    json f = json::array();
    for (auto& d : g.invariant_factors()) f.push_back(int_json(d));
    return {{"invariant_factors", f}, {"order", int_json(g.order())}, {"text", g.str()}};
}

inline json group_info_json(const GroupInfo& g) {
    json j{{"extent", to_string(g.extent)}};
    if (g.group) j["group"] = group_json(*g.group);
    if (g.extent != Extent::infinite) {
        j["divisor"] = int_json(g.divisor);
        j["lower"] = int_json(g.lower);
        j["upper"] = g.upper ? int_json(*g.upper) : json(nullptr);
    }
    j["witnesses"] = g.witnesses;
    return j;
}

inline json k0_part_json(const K0Part& p) {
    json j{{"label", p.label}, {"extent", to_string(p.extent)}, {"source", p.source}};
    if (p.module) {
        j["group"] = group_json(p.module->group());
        j["minus_one_eigenspace"] = group_json(eigen_set(*p.module, Sign::minus()).group);
    }
    j["order"] = p.order ? int_json(*p.order) : json(nullptr);
    j["order_divisor"] = int_json(p.order_divisor);
    j["xbar_divisor"] = int_json(p.xbar_divisor);
    j["order_odd"] = p.order_odd ? json(*p.order_odd) : json(nullptr);
    j["notes"] = p.notes;
    return j;
}

inline json audit_json(const std::vector<AuditFinding>& a) {
    json arr = json::array();
    for (auto& f : a) arr.push_back({{"m", f.m}, {"fact", f.fact}, {"check", f.check}, {"consistent", f.consistent}, {"detail", f.detail}});
    return arr;
}

inline json wh_json(const WhStructure& W) {
    json classes = json::array();
    for (auto& c : W.k0.class_parts) classes.push_back(k0_part_json(c));
    return {{"wh_rank", W.free_rank},
            {"nk1_zero", W.nk1_zero},
            {"j_group", group_info_json(W.j_group)},
            {"i_group", group_info_json(W.i_group)},
            {"tate_group", group_info_json(W.tate_group)},
            {"tate_branch", W.tate_branch},
            {"tate_constraints", W.tate_constraints},
            {"k0", {{"d_part", k0_part_json(W.k0.d_part)}, {"class_parts", classes}, {"notes", W.k0.notes}}},
            {"stored_fact_audit", audit_json(W.k0.audit)}};
}

inline json verdict_json(const SetVerdict& v) {
    return {{"verdict", to_string(v.verdict)},
            {"nontrivial", v.nontrivial ? json(*v.nontrivial) : json(nullptr)},
            {"lower", v.lower ? int_json(*v.lower) : json(nullptr)},
            {"upper", v.upper ? int_json(*v.upper) : json(nullptr)},
            {"rule", v.rule},
            {"witnesses", v.witnesses}};
}

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "trivial") return Verdict::trivial;
    if (s == "finite") return Verdict::finite;
    if (s == "infinite") return Verdict::infinite;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

inline SetVerdict verdict_from_json(const json& j) {
    SetVerdict v;
    v.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    if (!j.at("nontrivial").is_null()) v.nontrivial = j.at("nontrivial").get<bool>();
    if (!j.at("lower").is_null()) v.lower = int_from_json(j.at("lower"));
    if (!j.at("upper").is_null()) v.upper = int_from_json(j.at("upper"));
    v.rule = j.at("rule").get<std::string>();
    v.witnesses = j.at("witnesses").get<std::vector<std::string>>();
    return v;
}

// frozen field set: n, m, mhs, mhcob, mhs_hcob, a2k_order, ingredients, provenance
inline json report_json(const ManifoldSetReport& r) {
    return {{"n", r.n},
            {"m", r.m},
            {"mhs", verdict_json(r.mhs)},
            {"mhcob", verdict_json(r.mhcob)},
            {"mhs_hcob", verdict_json(r.mhs_hcob)},
            {"a2k_order", int_json(r.a2k_order)},
            {"ingredients", wh_json(r.ingredients)},
            {"provenance", r.provenance}};
}

// the summary fields of a report; ingredients stay as JSON
struct ParsedReport {
    long n = 0;
    u64 m = 0;
    SetVerdict mhs, mhcob, mhs_hcob;
    Int a2k_order;
    json ingredients;
    std::string provenance;
};

inline ParsedReport report_from_json(const json& j) {
    ParsedReport p;
    p.n = j.at("n").get<long>();
    p.m = j.at("m").get<u64>();
    p.mhs = verdict_from_json(j.at("mhs"));
    p.mhcob = verdict_from_json(j.at("mhcob"));
    p.mhs_hcob = verdict_from_json(j.at("mhs_hcob"));
    p.a2k_order = int_from_json(j.at("a2k_order"));
    p.ingredients = j.at("ingredients");
    p.provenance = j.at("provenance").get<std::string>();
    return p;
}

inline json report_json(const ParsedReport& p) {
    return {{"n", p.n},
            {"m", p.m},
            {"mhs", verdict_json(p.mhs)},
            {"mhcob", verdict_json(p.mhcob)},
            {"mhs_hcob", verdict_json(p.mhs_hcob)},
            {"a2k_order", int_json(p.a2k_order)},
            {"ingredients", p.ingredients},
            {"provenance", p.provenance}};
}

inline json verify_json(const ConsistencyRecord& c) {
    json checks = json::array();
    for (auto& k : c.checks)
        checks.push_back({{"name", k.name},
                          {"rule", k.rule_side},
                          {"ingredients", k.ingredient_side},
                          {"ok", k.ok ? json(*k.ok) : json(nullptr)}});
    return {{"n", c.n}, {"m", c.m}, {"status", c.status()}, {"checks", checks}, {"stored_fact_audit", audit_json(c.stored_fact_audit)}};
}

// ---------------------------------------------------------------- text encoding

inline std::string verdict_text(const SetVerdict& v) {
    std::string s = to_string(v.verdict);
    if (v.verdict == Verdict::finite) s += v.nontrivial ? (*v.nontrivial ? ", nontrivial" : ", trivial") : ", triviality undecided";
    if (v.verdict == Verdict::finite && (v.lower || v.upper))
        s += ", " + (v.lower ? v.lower->get_str() : std::string("1")) + " <= |set| <= " + (v.upper ? v.upper->get_str() : std::string("?"));
    for (auto& w : v.witnesses) s += "\n      " + w;
    return s;
}

inline std::string group_info_text(const GroupInfo& g) {
    std::string s = to_string(g.extent);
    if (g.group) s += ": " + g.group->str();
    if (!g.group && g.extent != Extent::infinite) {
        if (g.divisor > 1) s += ", order divisible by " + g.divisor.get_str();
        if (g.lower > 1) s += ", order >= " + g.lower.get_str();
        if (g.upper) s += ", order <= " + g.upper->get_str();
    }
    return s;
}

inline std::string report_text(const ManifoldSetReport& r) {
    std::ostringstream os;
    os << "n = " << r.n << ", m = " << r.m << ", |A_" << r.n << "(" << r.m << ")| = " << r.a2k_order << "\n";
    os << "  M^h_s        " << verdict_text(r.mhs) << "\n";
    os << "  M^hCob_s     " << verdict_text(r.mhcob) << "\n";
    os << "  M^h_s,hCob   " << verdict_text(r.mhs_hcob) << "\n";
    const auto& W = r.ingredients;
    os << "  J_n          " << group_info_text(W.j_group) << "\n";
    os << "  I_n          " << group_info_text(W.i_group) << "\n";
    os << "  H^{n+1}      " << group_info_text(W.tate_group) << "\n";
    os << "  provenance   " << r.provenance << "\n";
    return os.str();
}

inline std::string verify_text(const ConsistencyRecord& c) {
    std::ostringstream os;
    os << "n = " << c.n << ", m = " << c.m << ": " << c.status() << "\n";
    for (auto& k : c.checks)
        os << "  [" << (k.ok ? (*k.ok ? "ok" : "FAIL") : "n/a") << "] " << k.name << ": " << k.rule_side << " | " << k.ingredient_side << "\n";
    for (auto& a : c.stored_fact_audit)
        os << "  stored fact " << (a.consistent ? "ok" : "CONFLICT") << ": " << a.fact << ", " << a.check << " (" << a.detail << ")\n";
    return os.str();
}

// ---------------------------------------------------------------- cache

class ResultCache {
  public:
    explicit ResultCache(std::string path) : path_(std::move(path)) {
        std::ifstream in(path_);
        if (!in) return;
        try {
            auto j = json::parse(in);
            if (j.value("schema", 0) == kCacheSchema && j.contains("entries")) doc_ = j;
        } catch (const json::exception&) {
            // unreadable cache: start over
        }
    }
    std::optional<std::pair<int, std::string>> get(const std::string& key) const {
        if (!doc_.contains("entries") || !doc_["entries"].contains(key)) return std::nullopt;
        const auto& e = doc_["entries"][key];
        if (e.value("version", "") != kToolVersion) return std::nullopt;
        return std::pair{e.at("exit").get<int>(), e.at("output").get<std::string>()};
    }
    void put(const std::string& key, int code, const std::string& output) {
        doc_["schema"] = kCacheSchema;
        doc_["entries"][key] = {{"version", kToolVersion}, {"exit", code}, {"output", output}};
        std::string tmp = path_ + ".tmp";
        {
            std::ofstream out(tmp);
            out << doc_.dump(1) << "\n";
        }
        std::filesystem::rename(tmp, path_);
    }

  private:
    std::string path_;
    json doc_ = json{{"schema", kCacheSchema}, {"entries", json::object()}};
};

// ---------------------------------------------------------------- dispatch

struct CliOptions {
    long n = 0;
    u64 m = 0, k = 0, from = 0, to = 0;
    long degree = 1;
    unsigned jobs = 1;
    std::string format = "text";
    std::string cache;
    std::string module = "k0";
    std::string orders;
    std::string action = "trivial";
};

inline std::vector<Int> parse_orders(const std::string& s) {
    std::vector<Int> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        Int x;
        if (x.set_str(item, 10) != 0 || x < 1) throw std::invalid_argument("bad cyclic order '" + item + "'");
        v.push_back(x);
    }
    return v;
}

namespace detail {

inline std::string sweep_row(const SweepEntry& e, const Limits& lim) {
    std::ostringstream os;
    os << e.m;
    if (!e.report) {
        os << "\terror: " << e.error << "\n";
        return os.str();
    }
    const auto& r = *e.report;
    os << "\t" << (is_squarefree(e.m) ? "yes" : "no");
    if (totient(e.m) <= lim.max_hminus_totient) {
        Int h = hminus(e.m);
        os << "\t" << h << "\t" << odd_part(h);
    } else {
        os << "\t-\t-";
    }
    auto short_v = [](const SetVerdict& v) {
        if (v.verdict != Verdict::finite) return std::string(to_string(v.verdict));
        return std::string(v.nontrivial ? (*v.nontrivial ? "nontrivial" : "trivial") : "finite");
    };
    os << "\t" << short_v(r.mhs) << "\t" << short_v(r.mhcob) << "\t" << short_v(r.mhs_hcob) << "\n";
    return os.str();
}

inline json hminus_json(u64 m, const Int& h) { return {{"m", m}, {"hminus", int_json(h)}, {"odd_part", int_json(odd_part(h))}}; }

// the command proper; returns exit code, writes the payload to out
inline int dispatch(const std::string& cmd, const CliOptions& o, std::ostream& out) {
    bool js = o.format == "json";
    Limits lim;
    auto emit = [&](const json& j, const std::string& text) { out << (js ? j.dump(2) + "\n" : text); };

    if (cmd == "classify") {
        auto r = classify(o.n, o.m, lim);
        emit(report_json(r), report_text(r));
        return r.provenance == "inconsistent" ? 3 : 0;
    }
    if (cmd == "verify") {
        auto c = verify(o.n, o.m, lim);
        emit(verify_json(c), verify_text(c));
        return c.consistent ? 0 : 3;
    }
    if (cmd == "sweep") {
        auto rows = sweep(o.n, o.from, o.to, lim, o.jobs);
        json arr = json::array();
        std::string text = "m\tsquarefree\th-\todd(h-)\tM^h_s\tM^hCob_s\tM^h_s,hCob\n";
        for (auto& e : rows) {
            text += sweep_row(e, lim);
            arr.push_back(e.report ? report_json(*e.report) : json{{"m", e.m}, {"error", e.error}});
        }
        emit(arr, text);
        return 0;
    }
    if (cmd == "hminus") {
        Int h = hminus(o.m);
        emit(hminus_json(o.m, h), h.get_str() + "\n");
        return 0;
    }
    if (cmd == "cbound") {
        Int c = c_bound(o.m);
        emit(json{{"m", o.m}, {"c_bound", int_json(c)}}, c.get_str() + "\n");
        return 0;
    }
    if (cmd == "vtilde") {
        auto V = vtilde_module(o.m);
        emit(json{{"m", o.m}, {"group", group_json(V->group())}, {"tate_1", group_json(tate(*V, 1))}}, V->group().str() + "\n");
        return 0;
    }
    if (cmd == "tate") {
        InvModule M;
        std::string what;
        if (o.module == "km") {
            M = km_v_module(static_cast<u64>(o.n));
            what = "V_{2^" + std::to_string(o.n + 1) + "}";
        } else if (o.module == "vtilde") {
            M = *vtilde_module(o.m);
            what = "V~_" + std::to_string(o.m);
        } else if (o.module == "k0") {
            auto K = k0_description(o.m, lim);
            auto T = K.total_module();
            if (!T) throw ScopeError("K~_0(ZC_" + std::to_string(o.m) + ") is not determined as a module; try 'am'");
            M = *T;
            what = "K~_0(ZC_" + std::to_string(o.m) + ")";
        } else if (o.module == "cyclic") {
            auto G = FinAbGroup::from_cyclic_orders(parse_orders(o.orders));
            if (o.action == "trivial") M = InvModule::trivial_action(G);
            else if (o.action == "negation") M = InvModule::negation(G);
            else throw std::invalid_argument("--action must be trivial or negation");
            what = G.str() + " (" + o.action + ")";
        } else {
            throw std::invalid_argument("--module must be km, vtilde, k0 or cyclic");
        }
        auto H = tate(M, o.degree);
        emit(json{{"module", what}, {"degree", o.degree}, {"group", group_json(M.group())}, {"tate", group_json(H)}}, H.str() + "\n");
        return 0;
    }
    if (cmd == "am") {
        if (o.m < 2) throw std::invalid_argument("--m must be >= 2");
        auto r = a_m(o.m, lim);
        json j = group_info_json(r.info);
        j["m"] = o.m;
        j["branch"] = r.branch;
        j["constraints"] = r.constraints;
        std::string text = group_info_text(r.info) + "\n";
        for (auto& c : r.constraints) text += "  " + c + "\n";
        emit(j, text);
        return 0;
    }
    if (cmd == "a2k") {
        u64 k = o.k ? o.k : static_cast<u64>(o.n / 2);
        if (!o.k && o.n % 2 != 0) throw ScopeError("--n must be even");
        Int a = a2k_order(k, o.m);
        emit(json{{"k", k}, {"m", o.m}, {"a2k_order", int_json(a)}}, a.get_str() + "\n");
        return 0;
    }
    throw std::invalid_argument("unknown command " + cmd);
}

inline std::string cache_key(const std::string& cmd, const CliOptions& o) {
    json j{{"op", cmd},       {"n", o.n},           {"m", o.m},           {"k", o.k},         {"from", o.from},
           {"to", o.to},      {"degree", o.degree}, {"module", o.module}, {"orders", o.orders}, {"action", o.action},
           {"format", o.format}};
    return j.dump();
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cyclok: cyclotomic class groups, kernel groups and manifold-set classification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    CliOptions o;
    const char* env = std::getenv(kCacheEnv);
    if (env) o.cache = env;

    auto common = [&](CLI::App* s) {
        s->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        s->add_option("--cache", o.cache, "result cache file (default from $" + std::string(kCacheEnv) + ")");
    };
    auto* c_classify = app.add_subcommand("classify", "verdicts for the three manifold sets");
    c_classify->add_option("--n", o.n, "even dimension >= 4")->required();
    c_classify->add_option("--m", o.m, "order of the fundamental group of L")->required();
    auto* c_verify = app.add_subcommand("verify", "recompute ingredients and check them against the verdicts");
    c_verify->add_option("--n", o.n)->required();
    c_verify->add_option("--m", o.m)->required();
    auto* c_sweep = app.add_subcommand("sweep", "classify over a range of m");
    c_sweep->add_option("--n", o.n)->required();
    c_sweep->add_option("--from", o.from, "first m")->required();
    c_sweep->add_option("--to", o.to, "last m")->required();
    c_sweep->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 256u));
    auto* c_hminus = app.add_subcommand("hminus", "relative class number h^-_m");
    c_hminus->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
    auto* c_cbound = app.add_subcommand("cbound", "c_m bound for |V~_m|");
    c_cbound->add_option("--m", o.m)->required();
    auto* c_vtilde = app.add_subcommand("vtilde", "the group V~_m");
    c_vtilde->add_option("--m", o.m)->required();
    auto* c_tate = app.add_subcommand("tate", "Tate cohomology of an involutive module");
    c_tate->add_option("--module", o.module, "km, vtilde, k0 or cyclic")->required();
    c_tate->add_option("--n", o.n, "Kervaire-Murthy index (km)");
    c_tate->add_option("--m", o.m, "m (vtilde, k0)");
    c_tate->add_option("--orders", o.orders, "comma separated cyclic orders (cyclic)");
    c_tate->add_option("--action", o.action, "trivial or negation (cyclic)");
    c_tate->add_option("--degree", o.degree, "Tate degree");
    auto* c_am = app.add_subcommand("am", "A_m = H^1(C_2; K~_0(ZC_m))");
    c_am->add_option("--m", o.m)->required();
    auto* c_a2k = app.add_subcommand("a2k", "order of A_2k(m)");
    c_a2k->add_option("--m", o.m)->required();
    c_a2k->add_option("--k", o.k);
    c_a2k->add_option("--n", o.n);
    for (auto* s : {c_classify, c_verify, c_sweep, c_hminus, c_cbound, c_vtilde, c_tate, c_am, c_a2k}) common(s);

    std::vector<const char*> argv{"cyclok"};
    for (auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }
    std::string cmd = app.get_subcommands().front()->get_name();

    std::optional<ResultCache> cache;
    std::string key = detail::cache_key(cmd, o);
    try {
        if (!o.cache.empty()) {
            cache.emplace(o.cache);
            if (auto hit = cache->get(key)) {
                out << hit->second;
                return hit->first;
            }
        }
        std::ostringstream buf;
        int code = detail::dispatch(cmd, o, buf);
        out << buf.str();
        if (cache) cache->put(key, code, buf.str());
        return code;
    } catch (const ScopeError& e) {
        err << "scope error: " << e.what() << "\n";
        return 2;
    } catch (const ConsistencyError& e) {
        err << "consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cyclok
