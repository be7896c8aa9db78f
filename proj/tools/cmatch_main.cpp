// Batch experiment runner: instance generation, verifier-vs-oracle campaigns,
// trace emission and replay.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmatch/dfnc.hpp>
#include <cmatch/gen.hpp>
#include <cmatch/io.hpp>
#include <cmatch/oracle.hpp>
#include <cmatch/verifier.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cmatch;

namespace {

FlowMode parse_mode(const std::string& mode) {
    if (mode == "unbounded") return FlowMode::unbounded;
    if (mode == "ring") return FlowMode::ring;
    throw InvalidParams("mode must be 'unbounded' or 'ring'");
}

std::pair<std::uint64_t, std::uint64_t> parse_seeds(const std::string& spec) {
    auto dots = spec.find("..");
    if (dots == std::string::npos) {
        std::uint64_t s = std::stoull(spec);
        return {s, s};
    }
    std::uint64_t a = std::stoull(spec.substr(0, dots));
    std::uint64_t b = std::stoull(spec.substr(dots + 2));
    if (b < a) throw InvalidParams("seed range end before start");
    return {a, b};
}

json instance_json(const Instance& inst) {
    json edges = json::array();
    for (const Edge& e : inst.graph.edges()) edges.push_back({e.u, e.v});
    json matched = json::array();
    for (const Edge& e : inst.matching.edges()) matched.push_back({e.u, e.v});
    return {{"n", inst.graph.n()}, {"edges", edges}, {"matching", matched}};
}

Instance instance_from_json(const json& j) {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    Graph g = Graph::from_edges(j.at("n").get<int>(), edges);
    std::vector<Edge> matched;
    for (const auto& e : j.at("matching"))
        matched.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return {g, Matching::validate(g, matched)};
}

struct OracleCheck {
    bool ran = false;
    bool sound = true;    // every disproval is witnessed
    bool agree = true;    // verdict matches the oracle's decision
    int oracle_len = -1;  // -1: the matching is maximum
};

OracleCheck run_oracle_check(const Instance& inst, const Verdict& v) {
    OracleCheck out;
    if (inst.graph.n() > 26) return out;  // oracle scale
    out.ran = true;
    auto sa = shortest_augmenting(inst.graph, inst.matching);
    out.oracle_len = sa ? sa->length : -1;
    out.agree = v.verified() == !sa.has_value();
    if (!v.verified()) {
        if (!sa || sa->length != v.ell) {
            out.sound = false;
        } else if (!sa->overflow) {
            bool witnessed = false;
            for (const auto& p : sa->paths) {
                NodeId a = std::min(p.nodes.front(), p.nodes.back());
                NodeId b = std::max(p.nodes.front(), p.nodes.back());
                if (a == std::min(v.f, v.f_prime) && b == std::max(v.f, v.f_prime))
                    witnessed = true;
            }
            out.sound = witnessed;
        }
    }
    out.agree = out.agree && out.sound;
    return out;
}

void write_trace_file(const std::string& path, const Instance& inst, int radius, FlowMode mode,
                      std::uint64_t seed, std::uint64_t gamma, const Trace& trace) {
    std::ofstream f(path);
    if (!f) throw InvalidParams("cannot write " + path);
    json meta{{"meta",
               {{"instance", instance_json(inst)},
                {"radius", radius},
                {"mode", mode == FlowMode::unbounded ? "unbounded" : "ring"},
                {"seed", seed},
                {"gamma", gamma}}}};
    f << meta.dump() << '\n';
    f << trace.to_jsonl();
}

int cmd_generate(const std::string& family, int n, int depth, std::uint64_t seed,
                 const std::string& out_dir) {
    Instance inst = generate(family, n, depth, seed);
    fs::create_directories(out_dir);
    save_graph((fs::path(out_dir) / "graph.txt").string(), inst.graph);
    save_matching((fs::path(out_dir) / "matching.txt").string(), inst.matching);
    std::cout << json{{"family", family},
                      {"n", inst.graph.n()},
                      {"m", inst.graph.m()},
                      {"matching_size", inst.matching.size()},
                      {"out", out_dir}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& matching_path,
               const std::string& mode, std::uint64_t seed, int gamma_exp, bool oracle_check) {
    Graph g = load_graph(graph_path);
    Matching m = load_matching(g, matching_path);
    VerifyOptions opts;
    opts.mode = parse_mode(mode);
    opts.seed = seed;
    opts.gamma_exp = gamma_exp;
    Verdict v = verify(g, m, opts);
    json out = v.to_json();
    int rc = 0;
    if (oracle_check) {
        auto check = run_oracle_check(Instance{g, m}, v);
        out["oracle"] = {{"ran", check.ran},
                         {"agree", check.agree},
                         {"sound", check.sound},
                         {"shortest_len", check.oracle_len}};
        if (check.ran && !check.sound) rc = 1;
    }
    std::cout << out.dump() << "\n";
    return rc;
}

int cmd_trace(const std::string& graph_path, const std::string& matching_path, int radius,
              const std::string& mode, std::uint64_t seed, int gamma_exp,
              const std::string& out_path) {
    Graph g = load_graph(graph_path);
    Matching m = load_matching(g, matching_path);
    FlowMode fm = parse_mode(mode);
    std::uint64_t gamma = 0;
    if (fm == FlowMode::ring) {
        gamma = 1;
        for (int i = 0; i < gamma_exp; ++i) gamma *= static_cast<std::uint64_t>(g.n());
        gamma = std::max<std::uint64_t>(gamma, 2);
    }
    if (radius <= 0) radius = 2 * g.n();
    auto run = run_dfnc(g, m, radius, fm, seed, /*with_exchange=*/true, radius,
                        /*bounded=*/fm == FlowMode::ring, gamma, /*capture=*/true);
    write_trace_file(out_path, Instance{g, m}, radius, fm, seed, gamma, run.result.trace);
    std::cout << json{{"rounds", run.result.rounds},
                      {"messages", run.result.messages_sent},
                      {"max_bits", run.result.max_message_bits},
                      {"out", out_path}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_replay(const std::string& trace_path, int max_rounds) {
    std::ifstream f(trace_path);
    if (!f) throw InvalidParams("cannot open " + trace_path);
    std::string line;
    if (!std::getline(f, line)) throw InvalidParams("empty trace file");
    json meta = json::parse(line).at("meta");
    Instance inst = instance_from_json(meta.at("instance"));
    int radius = meta.at("radius").get<int>();
    FlowMode fm = parse_mode(meta.at("mode").get<std::string>());
    std::uint64_t seed = meta.at("seed").get<std::uint64_t>();
    std::uint64_t gamma = meta.at("gamma").get<std::uint64_t>();
    std::string stored;
    while (std::getline(f, line)) {
        stored += line;
        stored += '\n';
    }

    if (radius > max_rounds) throw InvalidParams("trace radius exceeds --max-rounds");
    auto run = run_dfnc(inst.graph, inst.matching, radius, fm, seed, true, radius,
                        fm == FlowMode::ring, gamma, true);
    std::string fresh = run.result.trace.to_jsonl();
    bool identical = fresh == stored;
    std::cout << json{{"identical", identical},
                      {"rounds", run.result.rounds},
                      {"messages", run.result.messages_sent}}
                     .dump()
              << "\n";
    return identical ? 0 : 1;
}

struct CampaignSpec {
    std::string family = "random_with_random_matching";
    int n = 12;
    int depth = 2;
    std::uint64_t seed_lo = 0, seed_hi = 99;
    std::string mode = "unbounded";
    int gamma_exp = 6;
    bool oracle_check = true;
    std::string out_dir = "campaign_out";

    json to_json() const {
        return {{"family", family},   {"n", n},
                {"depth", depth},     {"seeds", {seed_lo, seed_hi}},
                {"mode", mode},       {"gamma_exp", gamma_exp},
                {"oracle_check", oracle_check}};
    }
    static CampaignSpec from_json(const json& j) {
        CampaignSpec spec;
        spec.family = j.at("family").get<std::string>();
        spec.n = j.at("n").get<int>();
        spec.depth = j.at("depth").get<int>();
        spec.seed_lo = j.at("seeds").at(0).get<std::uint64_t>();
        spec.seed_hi = j.at("seeds").at(1).get<std::uint64_t>();
        spec.mode = j.at("mode").get<std::string>();
        spec.gamma_exp = j.at("gamma_exp").get<int>();
        spec.oracle_check = j.at("oracle_check").get<bool>();
        return spec;
    }
};

int cmd_campaign(const CampaignSpec& spec) {
    fs::create_directories(spec.out_dir);
    {
        std::ofstream rec((fs::path(spec.out_dir) / "campaign.json").string());
        rec << spec.to_json().dump(2) << "\n";
    }
    std::ofstream results((fs::path(spec.out_dir) / "results.jsonl").string());

    long long runs = 0, disproved = 0, oracle_checked = 0, agreements = 0, violations = 0;
    long long errors = 0;
    int max_bits = 0;
    double worst_disprove_ratio = 0, worst_verify_ratio = 0;

    for (std::uint64_t seed = spec.seed_lo; seed <= spec.seed_hi; ++seed) {
        json line{{"family", spec.family}, {"seed", seed}};
        try {
            Instance inst = generate(spec.family, spec.n, spec.depth, seed);
            VerifyOptions opts;
            opts.mode = parse_mode(spec.mode);
            opts.seed = seed;
            opts.gamma_exp = spec.gamma_exp;
            Verdict v = verify(inst.graph, inst.matching, opts);
            ++runs;
            line["n"] = inst.graph.n();
            line["matching_size"] = inst.matching.size();
            line["verdict"] = v.verified() ? "Verified" : "Disproved";
            line["rounds"] = v.rounds_used;
            line["tree_depth"] = v.tree_depth;
            line["max_bits"] = v.max_message_bits;
            max_bits = std::max(max_bits, v.max_message_bits);
            if (!v.verified()) {
                ++disproved;
                line["ell"] = v.ell;
                double ratio = static_cast<double>(v.rounds_used) / (v.tree_depth + v.ell + 1);
                worst_disprove_ratio = std::max(worst_disprove_ratio, ratio);
            } else {
                double ratio = static_cast<double>(v.rounds_used) /
                               (inst.matching.size() + v.tree_depth + 1);
                worst_verify_ratio = std::max(worst_verify_ratio, ratio);
            }
            if (spec.oracle_check) {
                auto check = run_oracle_check(inst, v);
                if (check.ran) {
                    ++oracle_checked;
                    if (check.agree) ++agreements;
                    if (!check.sound) ++violations;
                    line["oracle_len"] = check.oracle_len;
                    line["agree"] = check.agree;
                    line["sound"] = check.sound;
                }
            }
        } catch (const Error& e) {
            ++errors;
            line["error"] = e.what();
        }
        results << line.dump() << "\n";
    }

    json summary{{"runs", runs},
                 {"disproved", disproved},
                 {"errors", errors},
                 {"oracle_checked", oracle_checked},
                 {"agreements", agreements},
                 {"soundness_violations", violations},
                 {"agreement_rate",
                  oracle_checked ? static_cast<double>(agreements) / oracle_checked : 1.0},
                 {"max_message_bits", max_bits},
                 {"worst_disprove_round_ratio", worst_disprove_ratio},
                 {"worst_verify_round_ratio", worst_verify_ratio}};
    {
        std::ofstream sf((fs::path(spec.out_dir) / "summary.json").string());
        sf << summary.dump(2) << "\n";
    }
    std::cout << summary.dump(2) << "\n";
    return violations == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CONGEST maximum-matching verification workbench"};
    app.require_subcommand(1);

    std::string family = "random_with_random_matching", out_dir = "instance";
    std::string graph_path, matching_path, mode = "unbounded", oracle = "on";
    std::string trace_out = "trace.jsonl", replay_path, seeds = "0..99", spec_path;
    int n = 12, depth = 2, gamma_exp = 6, radius = 0, max_rounds = 100000;
    std::uint64_t seed = 0;
    CampaignSpec spec;

    auto* g = app.add_subcommand("generate", "emit a graph/matching instance");
    g->add_option("--family", family, "instance family")->check(CLI::IsMember(known_families()));
    g->add_option("--n", n, "node count");
    g->add_option("--depth", depth, "nesting depth for cycle families");
    g->add_option("--seed", seed, "generator seed");
    g->add_option("--out", out_dir, "output directory");

    auto* v = app.add_subcommand("verify", "run the verifier on instance files");
    v->add_option("--graph", graph_path, "graph file")->required();
    v->add_option("--matching", matching_path, "matching file")->required();
    v->add_option("--mode", mode, "unbounded or ring")
        ->check(CLI::IsMember({"unbounded", "ring"}));
    v->add_option("--seed", seed, "run seed");
    v->add_option("--gamma-exp", gamma_exp, "ring modulus exponent c in gamma = n^c");
    v->add_option("--oracle-check", oracle, "on or off")->check(CLI::IsMember({"on", "off"}));

    auto* t = app.add_subcommand("trace", "emit a clustering-run trace as JSON lines");
    t->add_option("--graph", graph_path, "graph file")->required();
    t->add_option("--matching", matching_path, "matching file")->required();
    t->add_option("--radius", radius, "clustering radius (default 2n)");
    t->add_option("--mode", mode, "unbounded or ring")
        ->check(CLI::IsMember({"unbounded", "ring"}));
    t->add_option("--seed", seed, "run seed");
    t->add_option("--gamma-exp", gamma_exp, "ring modulus exponent");
    t->add_option("--out", trace_out, "trace output path");

    auto* r = app.add_subcommand("replay", "re-run a stored trace and compare");
    r->add_option("--replay", replay_path, "trace file")->required();
    r->add_option("--max-rounds", max_rounds, "safety cap");

    auto* c = app.add_subcommand("campaign", "verifier-vs-oracle batch run");
    c->add_option("--family", spec.family, "instance family")
        ->check(CLI::IsMember(known_families()));
    c->add_option("--n", spec.n, "node count");
    c->add_option("--depth", spec.depth, "nesting depth for cycle families");
    c->add_option("--seeds", seeds, "seed range A..B");
    c->add_option("--mode", spec.mode, "unbounded or ring")
        ->check(CLI::IsMember({"unbounded", "ring"}));
    c->add_option("--gamma-exp", spec.gamma_exp, "ring modulus exponent");
    c->add_option("--out", spec.out_dir, "output directory");
    c->add_option("--oracle-check", oracle, "on or off")->check(CLI::IsMember({"on", "off"}));
    c->add_option("--spec", spec_path, "rerun a serialized campaign.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (g->parsed()) return cmd_generate(family, n, depth, seed, out_dir);
        if (v->parsed())
            return cmd_verify(graph_path, matching_path, mode, seed, gamma_exp, oracle == "on");
        if (t->parsed())
            return cmd_trace(graph_path, matching_path, radius, mode, seed, gamma_exp, trace_out);
        if (r->parsed()) return cmd_replay(replay_path, max_rounds);
        if (c->parsed()) {
            if (!spec_path.empty()) {
                std::ifstream sf(spec_path);
                if (!sf) throw InvalidParams("cannot open " + spec_path);
                json j = json::parse(sf);
                std::string out_dir_keep = spec.out_dir;
                spec = CampaignSpec::from_json(j);
                spec.out_dir = out_dir_keep;
            } else {
                auto [lo, hi] = parse_seeds(seeds);
                spec.seed_lo = lo;
                spec.seed_hi = hi;
                spec.oracle_check = oracle == "on";
            }
            return cmd_campaign(spec);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
