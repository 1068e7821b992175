#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "popmatch/clone.hpp"
#include "popmatch/colorful.hpp"
#include "popmatch/errors.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/io.hpp"
#include "popmatch/solver.hpp"
#include "popmatch/stability.hpp"
#include "popmatch/voting.hpp"

namespace {

using nlohmann::ordered_json;
using namespace popmatch;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& body, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << body << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + out_path + "'");
    out << body << "\n";
}

Instance load_instance(const std::string& path) { return parse_instance(slurp(path)); }

Matching load_matching(const Instance& inst, const std::string& path) {
    return parse_matching(inst, slurp(path));
}

ordered_json matching_json(const Instance& inst, const Matching& m) {
    ordered_json edges = ordered_json::array();
    for (const Edge& e : m.edges)
        edges.push_back({{"agent", inst.agent_name(e.agent)}, {"job", inst.job_name(e.job)}});
    return ordered_json{{"edges", std::move(edges)}};
}

ordered_json colorful_json(const Instance& inst, const ColorfulMatching& m) {
    ordered_json edges = ordered_json::array();
    for (const ColoredEdge& e : m)
        edges.push_back({{"agent", inst.agent_name(e.left)},
                         {"job", inst.job_name(e.right)},
                         {"color", e.color}});
    return ordered_json{{"edges", std::move(edges)}};
}

// A plain one-color-class system over the instance itself: rank keys are the
// base preference ranks, every edge its own class.
PreferenceSystem instance_system(const Instance& inst) {
    PreferenceSystem sys;
    for (int a = 0; a < inst.num_agents(); ++a) sys.left_caps.push_back(inst.agent_capacity(a));
    for (int j = 0; j < inst.num_jobs(); ++j) sys.right_caps.push_back(inst.job_capacity(j));
    for (int be = 0; be < static_cast<int>(inst.edges().size()); ++be) {
        const Edge& e = inst.edges()[be];
        sys.edges.push_back({e.agent, e.job, be, inst.agent_rank(e.agent, e.job),
                             inst.job_rank(e.job, e.agent), 0, be});
    }
    return sys;
}

int cmd_validate(const std::string& file, const std::string& out) {
    Instance inst = load_instance(file);
    ordered_json doc{{"valid", true},
                     {"agents", inst.num_agents()},
                     {"jobs", inst.num_jobs()},
                     {"edges", static_cast<int>(inst.edges().size())},
                     {"total_agent_capacity", inst.total_agent_capacity()},
                     {"total_job_capacity", inst.total_job_capacity()},
                     {"admits_perfect_matching", admits_perfect_matching(inst)}};
    emit(doc.dump(2), out);
    std::cerr << "valid instance: " << inst.num_agents() << " agents, " << inst.num_jobs()
              << " jobs, " << inst.edges().size() << " edges\n";
    return 0;
}

int cmd_stable(const std::string& file, bool colorful, const std::string& out) {
    Instance inst = load_instance(file);
    if (!colorful) {
        SystemMatching sm = deferred_acceptance(instance_system(inst));
        std::vector<Edge> edges;
        for (int id : sm) edges.push_back(inst.edges()[id]);
        Matching m = make_matching(inst, std::move(edges));
        emit(matching_json(inst, m).dump(2), out);
        std::cerr << "stable matching with " << m.edges.size() << " edges\n";
        return 0;
    }
    ColorfulSystem cs = ColorfulSystem::over_instance(inst);
    SystemMatching sm = deferred_acceptance(cs.to_system());
    ColorfulMatching cm = colorful_from_system(cs, sm);
    emit(colorful_json(inst, cm).dump(2), out);
    std::cerr << "stable colorful matching with " << cm.size() << " edges over " << cs.colors()
              << " colors\n";
    return 0;
}

int cmd_verify(const std::string& file, const std::string& mfile, const std::string& out) {
    Instance inst = load_instance(file);
    PerfectMatching m = as_perfect(inst, load_matching(inst, mfile));
    PopularityVerdict verdict = is_popular_perfect(inst, m);
    if (verdict.popular) {
        emit(ordered_json{{"popular", true}}.dump(2), out);
        std::cerr << "popular among perfect matchings\n";
        return 0;
    }
    const Matching& witness = *verdict.witness;
    long long d = delta(inst, m.matching, witness).value;
    ordered_json doc{{"popular", false},
                     {"witness", matching_json(inst, witness)},
                     {"delta_vs_witness", d}};
    emit(doc.dump(2), out);
    std::cerr << "not popular: loses to the emitted witness by " << d << "\n";
    return 3;
}

int cmd_compare(const std::string& file, const std::string& m1file, const std::string& m2file,
                const std::string& out) {
    Instance inst = load_instance(file);
    Matching m1 = load_matching(inst, m1file);
    Matching m2 = load_matching(inst, m2file);
    DeltaValue d = delta(inst, m1, m2);
    ordered_json agents = ordered_json::object(), jobs = ordered_json::object();
    for (int a = 0; a < inst.num_agents(); ++a) agents[inst.agent_name(a)] = d.agent_votes[a];
    for (int j = 0; j < inst.num_jobs(); ++j) jobs[inst.job_name(j)] = d.job_votes[j];
    ordered_json doc{{"delta", d.value},
                     {"agent_votes", std::move(agents)},
                     {"job_votes", std::move(jobs)}};
    emit(doc.dump(2), out);
    std::cerr << "delta(m1, m2) = " << d.value << "\n";
    return 0;
}

int cmd_solve(const std::string& file, const std::string& out) {
    Instance inst = load_instance(file);
    SolveReport report = solve_min_cost(inst, enumeration_limit_from_env());
    ordered_json doc{{"matching", matching_json(inst, report.matching)},
                     {"cost", report.cost % kCostScale == 0
                                  ? ordered_json(report.cost / kCostScale)
                                  : ordered_json(static_cast<double>(report.cost) / kCostScale)},
                     {"enumerated", report.enumerated},
                     {"popular", report.popular},
                     {"certificate", report.certificate}};
    emit(doc.dump(2), out);
    std::cerr << "min-cost popular perfect matching costs " << format_cost(report.cost) << " ("
              << report.popular << " popular / " << report.enumerated << " perfect)\n";
    return 0;
}

int cmd_enumerate(const std::string& file, bool popular_only, const std::string& out) {
    Instance inst = load_instance(file);
    ordered_json arr = ordered_json::array();
    long long count = 0;
    enumerate_perfect_matchings(
        inst,
        [&](const Matching& m) {
            if (!popular_only || is_popular_perfect(inst, PerfectMatching{m}).popular) {
                ++count;
                arr.push_back(matching_json(inst, m));
            }
            return true;
        },
        enumeration_limit_from_env());
    ordered_json doc{{"count", count}, {"matchings", std::move(arr)}};
    emit(doc.dump(2), out);
    std::cerr << count << (popular_only ? " popular" : "") << " perfect matchings\n";
    return 0;
}

ordered_json colorful_instance_json(const ColorfulSystem& cs,
                                    const std::vector<std::string>& left_names,
                                    const std::vector<std::string>& right_names,
                                    const std::string& base_label) {
    // Per-vertex colored preference lists, materialised best-first.
    std::vector<std::vector<int>> left_inc(left_names.size()), right_inc(right_names.size());
    for (int be = 0; be < static_cast<int>(cs.base_edges().size()); ++be) {
        left_inc[cs.base_edges()[be].left].push_back(be);
        right_inc[cs.base_edges()[be].right].push_back(be);
    }
    ordered_json left = ordered_json::array(), right = ordered_json::array();
    for (std::size_t v = 0; v < left_names.size(); ++v) {
        std::sort(left_inc[v].begin(), left_inc[v].end(), [&](int x, int y) {
            return cs.base_edges()[x].left_rank < cs.base_edges()[y].left_rank;
        });
        ordered_json prefs = ordered_json::array();
        for (int c = 1; c <= cs.colors(); ++c)
            for (int be : left_inc[v])
                prefs.push_back({{"name", right_names[cs.base_edges()[be].right]}, {"color", c}});
        left.push_back({{"name", left_names[v]},
                        {"capacity", cs.left_caps()[v]},
                        {"preferences", std::move(prefs)}});
    }
    for (std::size_t v = 0; v < right_names.size(); ++v) {
        std::sort(right_inc[v].begin(), right_inc[v].end(), [&](int x, int y) {
            return cs.base_edges()[x].right_rank < cs.base_edges()[y].right_rank;
        });
        ordered_json prefs = ordered_json::array();
        for (int c = cs.colors(); c >= 1; --c)
            for (int be : right_inc[v])
                prefs.push_back({{"name", left_names[cs.base_edges()[be].left]}, {"color", c}});
        right.push_back({{"name", right_names[v]},
                         {"capacity", cs.right_caps()[v]},
                         {"preferences", std::move(prefs)}});
    }
    return ordered_json{{"kind", "colorful-instance"},
                        {"base", base_label},
                        {"colors", cs.colors()},
                        {"left", std::move(left)},
                        {"right", std::move(right)}};
}

int cmd_reduce(const std::string& file, bool gstar, const std::string& mfile,
               const std::string& out) {
    Instance inst = load_instance(file);
    if (gstar) {
        ColorfulSystem cs = ColorfulSystem::over_instance(inst);
        std::vector<std::string> left, right;
        for (int a = 0; a < inst.num_agents(); ++a) left.push_back(inst.agent_name(a));
        for (int j = 0; j < inst.num_jobs(); ++j) right.push_back(inst.job_name(j));
        emit(colorful_instance_json(cs, left, right, "instance").dump(2), out);
        std::cerr << "colorful system over the instance: " << cs.base_edges().size()
                  << " base edges x " << cs.colors() << " colors\n";
        return 0;
    }
    PerfectMatching m = as_perfect(inst, load_matching(inst, mfile));
    ClonedInstance ci = ClonedInstance::build(inst);
    Realization r = realize(ci, inst, m);
    SubgraphGM g = SubgraphGM::build(ci, inst, r);
    ColorfulSystem cs = ColorfulSystem::over_subgraph(g);
    Instance expansion = ci.to_instance();
    std::vector<std::string> left, right;
    for (int ac = 0; ac < ci.num_agent_clones(); ++ac) left.push_back(expansion.agent_name(ac));
    for (int jc = 0; jc < ci.num_job_clones(); ++jc) right.push_back(expansion.job_name(jc));
    emit(colorful_instance_json(cs, left, right, "expansion-subgraph").dump(2), out);
    std::cerr << "colorful system over the matched expansion subgraph: "
              << cs.base_edges().size() << " base edges x " << cs.colors() << " colors\n";
    return 0;
}

int cmd_lift(const std::string& file, const std::string& mfile, const std::string& out) {
    Instance inst = load_instance(file);
    PerfectMatching m = as_perfect(inst, load_matching(inst, mfile));
    auto lifted = lift_to_stable(inst, m);
    if (!lifted) {
        emit(ordered_json{{"error", "no stable coloring exists; the matching is not popular "
                                    "among perfect matchings"}}
                 .dump(2),
             out);
        std::cerr << "no stable coloring\n";
        return 3;
    }
    emit(colorful_json(inst, *lifted).dump(2), out);
    std::cerr << "stable coloring found over " << ColorfulSystem::over_instance(inst).colors()
              << " colors\n";
    return 0;
}

int cmd_gen(std::uint64_t seed, int agents, int jobs, int max_cap, double density,
            const std::string& out) {
    Instance inst = generate_instance(seed, agents, jobs, max_cap, density);
    emit(serialize_instance(inst), out);
    std::cerr << "generated instance: " << inst.num_agents() << " agents, " << inst.num_jobs()
              << " jobs, " << inst.edges().size() << " edges\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"popular perfect matchings in capacitated preference instances"};
    app.require_subcommand(1);

    std::string file, mfile, out;
    std::vector<std::string> m_files;
    bool colorful = false, popular_only = false, gstar = false, gm = false;
    std::uint64_t seed = 1;
    int agents = 2, jobs = 2, max_cap = 1;
    double density = 1.0;

    auto* validate = app.add_subcommand("validate", "parse and validate an instance");
    validate->add_option("FILE", file)->required();
    validate->add_option("--out", out);

    auto* stable = app.add_subcommand("stable", "deferred acceptance on the instance or its "
                                                "colorful system");
    stable->add_option("FILE", file)->required();
    stable->add_flag("--colorful", colorful);
    stable->add_option("--out", out);

    auto* verify = app.add_subcommand("verify", "popularity verdict for a perfect matching");
    verify->add_option("FILE", file)->required();
    verify->add_option("--matching", mfile)->required();
    verify->add_option("--out", out);

    auto* compare = app.add_subcommand("compare", "head-to-head vote between two matchings");
    compare->add_option("FILE", file)->required();
    compare->add_option("--matching", m_files)->required()->expected(2);
    compare->add_option("--out", out);

    auto* solve = app.add_subcommand("solve", "min-cost popular perfect matching");
    solve->add_option("FILE", file)->required();
    solve->add_option("--out", out);

    auto* enumerate = app.add_subcommand("enumerate", "list perfect matchings");
    enumerate->add_option("FILE", file)->required();
    enumerate->add_flag("--popular-only", popular_only);
    enumerate->add_option("--out", out);

    auto* reduce = app.add_subcommand("reduce", "emit a colorful system document");
    reduce->add_option("FILE", file)->required();
    reduce->add_flag("--gstar", gstar);
    reduce->add_flag("--gm", gm);
    reduce->add_option("--matching", mfile);
    reduce->add_option("--out", out);

    auto* lift = app.add_subcommand("lift", "stable coloring of a perfect matching");
    lift->add_option("FILE", file)->required();
    lift->add_option("--matching", mfile)->required();
    lift->add_option("--out", out);

    auto* gen = app.add_subcommand("gen", "generate a perfect-matchable instance");
    gen->add_option("--seed", seed)->required();
    gen->add_option("--agents", agents)->required();
    gen->add_option("--jobs", jobs)->required();
    gen->add_option("--max-cap", max_cap)->required();
    gen->add_option("--density", density)->required();
    gen->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) return cmd_validate(file, out);
        if (stable->parsed()) return cmd_stable(file, colorful, out);
        if (verify->parsed()) return cmd_verify(file, mfile, out);
        if (compare->parsed()) return cmd_compare(file, m_files[0], m_files[1], out);
        if (solve->parsed()) return cmd_solve(file, out);
        if (enumerate->parsed()) return cmd_enumerate(file, popular_only, out);
        if (reduce->parsed()) {
            if (gstar == gm)
                throw ValidationError("reduce needs exactly one of --gstar or --gm");
            if (gm && mfile.empty())
                throw ValidationError("reduce --gm needs --matching");
            return cmd_reduce(file, gstar, mfile, out);
        }
        if (lift->parsed()) return cmd_lift(file, mfile, out);
        if (gen->parsed()) return cmd_gen(seed, agents, jobs, max_cap, density, out);
    } catch (const InternalError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const EnumLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const NotPopularError& e) {
        std::cerr << "not popular: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
