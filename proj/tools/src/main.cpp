#include "mixflow/bench.hpp"
#include "mixflow/dot_export.hpp"
#include "mixflow/json_io.hpp"
#include "mixflow/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

namespace {

using namespace mixflow;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotSatisfiable = 2;

struct CommonFlags {
    std::string ratio;
    int precision = 4;
    std::string mode = "pruned4";
    std::string epsilon = "1/100";
    std::string out_dir;
    std::string format = "json";
    std::string app_file;
    std::string arch_file;
};

Rational parse_share(const std::string& ratio) {
    auto colon = ratio.find(':');
    if (colon == std::string::npos) {
        throw ParseError("ratio must look like a:b, got '" + ratio + "'");
    }
    Rational a = Rational::parse(ratio.substr(0, colon));
    Rational b = Rational::parse(ratio.substr(colon + 1));
    if (a <= Rational(0) || b <= Rational(0)) throw ParseError("ratio parts must be positive");
    return a / (a + b);
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw std::runtime_error("cannot write " + name + " under " + dir);
    out << text;
}

std::string pretty(const Rational& v) { return v.str() + " (" + v.decimal(2) + ")"; }

int cmd_approx(const CommonFlags& flags) {
    ApproxRatio r = approximate_ratio(parse_share(flags.ratio), flags.precision);
    if (r.error.is_zero()) {
        std::cout << r.ratio_str() << " (error 0, depth " << r.depth << ")\n";
    } else {
        std::cout << r.ratio_str() << " (error " << r.error.str() << " ~ " << r.error.decimal(4)
                  << ", depth " << r.depth << ")\n";
    }
    return kExitOk;
}

int cmd_tree(const CommonFlags& flags, int units, std::int64_t budget,
             const std::string& format) {
    ApproxRatio target = approximate_ratio(parse_share(flags.ratio), flags.precision);
    TreeAlgorithm algo = tree_algorithm_from_string(flags.mode);

    SearchOptions options;
    options.budget = budget;
    SearchStats stats;
    MixingTree tree;
    if (algo == TreeAlgorithm::MinMix) {
        tree = min_mix_tree(target, units);
    } else {
        bool pruned = algo == TreeAlgorithm::Pruned4;
        NetworkGraph net = build_network(std::max(flags.precision, target.depth), pruned);
        tree = nfb_best_tree(net, target, units,
                             pruned ? SearchMode::Pruned4 : SearchMode::Exact, {}, options,
                             &stats);
    }
    if (stats.budget_exhausted) {
        std::cerr << "warning: search budget exhausted after " << stats.expanded
                  << " states; result may be suboptimal\n";
    }

    if (format == "dot") {
        std::string dot = tree.to_dot();
        if (flags.out_dir.empty()) std::cout << dot;
        else write_file(flags.out_dir, "tree.dot", dot);
        return kExitOk;
    }
    if (format == "json") {
        nlohmann::ordered_json doc;
        doc["target"] = target.ratio_str();
        doc["depth"] = target.depth;
        doc["error"] = target.error.str();
        doc["units_out"] = tree.units_out;
        doc["fluid_cost"] = tree.fluid_cost();
        doc["op_count"] = tree.op_count();
        doc["leaf_units"] = {{"a", tree.leaf_units_a}, {"b", tree.leaf_units_b}};
        nlohmann::ordered_json steps = nlohmann::ordered_json::array();
        for (const auto& s : tree.steps) {
            steps.push_back({{"conc", s.conc.str()},
                             {"level", s.level},
                             {"parents", {s.parent_lo.str(), s.parent_hi.str()}},
                             {"count", s.count}});
        }
        doc["steps"] = steps;
        nlohmann::ordered_json waste = nlohmann::ordered_json::object();
        for (const auto& [conc, n] : tree.waste) waste[conc.str()] = n;
        doc["waste"] = waste;
        doc["surplus"] = tree.surplus;
        std::string text = doc.dump(2);
        if (flags.out_dir.empty()) std::cout << text << "\n";
        else write_file(flags.out_dir, "tree.json", text);
        return kExitOk;
    }

    TreeMetrics m = tree_metrics(tree);
    std::cout << "target " << target.ratio_str() << " (" << to_string(algo) << ", "
              << units << " units out)\n";
    std::cout << "fluid_cost\t" << m.fluid_cost << "\n";
    std::cout << "op_count\t" << m.op_count << "\n";
    std::cout << "leaf_units\tA=" << tree.leaf_units_a << "\tB=" << tree.leaf_units_b << "\n";
    for (const auto& [conc, n] : m.waste_profile) {
        std::cout << "waste\t" << conc.str() << "\tx" << n << "\n";
    }
    if (m.surplus > 0) std::cout << "surplus\t" << tree.target.str() << "\tx" << m.surplus << "\n";
    if (!flags.out_dir.empty()) write_file(flags.out_dir, "tree.dot", tree.to_dot());
    return kExitOk;
}

void print_consumption(const std::string& header,
                       const std::map<std::string, Rational>& consumption) {
    std::cout << header << "\n";
    for (const auto& [reagent, v] : consumption) {
        std::cout << "  " << reagent << "\t" << pretty(v) << "\n";
    }
}

int cmd_assign(const CommonFlags& flags) {
    ApplicationGraph app = load_application_file(flags.app_file);
    ArchitectureSpec arch = load_architecture_file(flags.arch_file);
    auto diags = validate(app, arch);
    if (!diags.empty()) {
        for (const auto& d : diags) std::cerr << d.str() << "\n";
        return kExitUsage;
    }
    ApplicationGraph assigned = assign_volumes(app, arch);
    std::string doc = serialize_document(assigned, arch);
    if (flags.out_dir.empty()) std::cout << doc << "\n";
    else {
        write_file(flags.out_dir, "assigned.json", doc);
        write_file(flags.out_dir, "assigned.dot", to_dot(assigned));
    }
    return kExitOk;
}

int cmd_optimize(const CommonFlags& flags, bool no_lof) {
    ApplicationGraph app = load_application_file(flags.app_file);
    ArchitectureSpec arch = load_architecture_file(flags.arch_file);

    PipelineOptions options;
    options.precision = flags.precision;
    options.algorithm = tree_algorithm_from_string(flags.mode);
    options.reuse_leftovers = !no_lof;
    options.epsilon = Rational::parse(flags.epsilon);

    OptimizeReport report = optimize(app, arch, options);
    if (!report.diagnostics.empty()) {
        for (const auto& d : report.diagnostics) std::cerr << d.str() << "\n";
        return kExitUsage;
    }

    std::string doc = serialize_optimized_document(report.optimized, arch, report.savings);
    std::string dot = to_dot(report.optimized);
    if (!flags.out_dir.empty()) {
        write_file(flags.out_dir, "optimized.json", doc);
        write_file(flags.out_dir, "optimized.dot", dot);
    }

    if (flags.format == "json") {
        if (flags.out_dir.empty()) std::cout << doc << "\n";
    } else if (flags.format == "dot") {
        if (flags.out_dir.empty()) std::cout << dot;
    }

    print_consumption("input consumption (before reuse):", report.consumption_before);
    print_consumption("input consumption (after reuse):", report.consumption_after);
    if (!report.savings.empty()) print_consumption("savings:", report.savings);

    if (!report.leftovers_before.empty()) {
        std::cout << "leftover producers:\n";
        for (const auto& l : report.leftovers_before) {
            std::cout << "  " << l.source << "\t" << pretty(l.volume.amount()) << "\t"
                      << l.composition.str() << "\n";
        }
    }
    if (!report.residual.empty()) {
        std::cout << "residual waste:\n";
        for (const auto& l : report.residual) {
            std::cout << "  " << l.source << "\t" << pretty(l.volume.amount()) << "\t"
                      << l.composition.str() << "\n";
        }
    }

    std::int64_t ops = 0;
    for (const auto& n : report.optimized.nodes) {
        if (n.kind == OpKind::Mix || n.kind == OpKind::Detect || n.kind == OpKind::Generic) {
            ops += n.replication_factor;
        }
    }
    std::cout << "operations\t" << ops << "\n";
    std::cout << "conservation\t" << (report.audit.balanced ? "balanced" : "VIOLATED") << "\n";
    return report.audit.balanced ? kExitOk : kExitUsage;
}

int cmd_bench(const std::string& case_name, const std::string& mixer, const CommonFlags& flags) {
    bench::AssayBenchResult result;
    if (case_name == "glucose") {
        result = bench::run_glucose_trees(tree_algorithm_from_string(flags.mode));
    } else {
        fixtures::AssayCase assay = case_name == "cca" ? fixtures::cca() : fixtures::paa();
        result = bench::run_assay(assay, bench::mixer_setup_from_string(mixer),
                                  tree_algorithm_from_string(flags.mode));
    }

    std::cout << "case\t" << result.assay << "\tmixer\t" << to_string(result.setup) << "\n";
    std::cout << "approximated ratios:";
    for (const auto& r : result.approximated) std::cout << " " << r.ratio_str();
    std::cout << "\n";
    std::cout << "row\treagent\tbuffer\ttag\n";
    for (const auto& line : result.lines) {
        std::cout << line.label << "\t" << pretty(line.reagent) << "\t" << pretty(line.buffer)
                  << "\t[" << line.tag << "]\n";
    }
    return kExitOk;
}

int cmd_compare(std::uint64_t seed, int count, const CommonFlags& flags, std::int64_t budget) {
    SearchOptions options;
    options.budget = budget;
    auto rows = bench::compare_algorithms(seed, count, flags.precision, options);

    std::cout << "target\tmm_cost\texact_cost\tp4_cost\tmm_ops\texact_ops\tp4_ops\tgap\n";
    bool all_ok = true;
    double mm_cost = 0, ex_cost = 0, p4_cost = 0, mm_ops = 0, ex_ops = 0, p4_ops = 0;
    double mm_ms = 0, ex_ms = 0, p4_ms = 0;
    for (const auto& row : rows) {
        std::cout << row.target.ratio_str() << "\t" << row.cost_minmix << "\t" << row.cost_exact
                  << "\t" << row.cost_pruned4 << "\t" << row.ops_minmix << "\t" << row.ops_exact
                  << "\t" << row.ops_pruned4 << "\t" << (row.cost_pruned4 - row.cost_exact)
                  << "\n";
        if (row.budget_exhausted) {
            std::cerr << "warning: search budget exhausted on " << row.target.ratio_str()
                      << "; costs may be suboptimal\n";
        }
        all_ok = all_ok && row.ordering_ok;
        mm_cost += double(row.cost_minmix);
        ex_cost += double(row.cost_exact);
        p4_cost += double(row.cost_pruned4);
        mm_ops += double(row.ops_minmix);
        ex_ops += double(row.ops_exact);
        p4_ops += double(row.ops_pruned4);
        mm_ms += row.ms_minmix;
        ex_ms += row.ms_exact;
        p4_ms += row.ms_pruned4;
    }
    if (!rows.empty()) {
        double n = double(rows.size());
        std::cout << "avg_cost\t" << mm_cost / n << "\t" << ex_cost / n << "\t" << p4_cost / n
                  << "\n";
        std::cout << "avg_ops\t" << mm_ops / n << "\t" << ex_ops / n << "\t" << p4_ops / n
                  << "\n";
        std::cout << "avg_ms\t" << mm_ms / n << "\t" << ex_ms / n << "\t" << p4_ms / n << "\n";
        std::cout << "ordering\t" << (all_ok ? "ok" : "VIOLATED") << "\n";
    }
    return all_ok ? kExitOk : kExitUsage;
}

int cmd_export_dot(const CommonFlags& flags) {
    ApplicationGraph app = load_application_file(flags.app_file);
    ArchitectureSpec arch = load_architecture_file(flags.arch_file);
    auto diags = validate(app, arch);
    if (!diags.empty()) {
        for (const auto& d : diags) std::cerr << d.str() << "\n";
        return kExitUsage;
    }
    std::string dot = to_dot(app);
    if (flags.out_dir.empty()) std::cout << dot;
    else write_file(flags.out_dir, "application.dot", dot);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"volume assignment and mixing-tree synthesis for flow-based biochips"};
    cli.require_subcommand(1);

    CommonFlags flags;
    int units = 2;
    bool no_lof = false;
    std::uint64_t seed = 1;
    int count = 10;
    std::int64_t budget = 10'000'000;
    std::string case_name = "glucose";
    std::string mixer = "m1";

    auto add_io = [&](CLI::App* sub) {
        sub->add_option("--app", flags.app_file, "application JSON file")->required();
        sub->add_option("--arch", flags.arch_file, "architecture JSON file")->required();
        sub->add_option("--out", flags.out_dir, "output directory");
    };

    CLI::App* approx = cli.add_subcommand("approx", "approximate a mixing ratio");
    approx->add_option("--ratio", flags.ratio, "target ratio a:b")->required();
    approx->add_option("--precision", flags.precision, "precision level");

    std::string tree_format = "text";
    CLI::App* tree = cli.add_subcommand("tree", "synthesize one mixing tree");
    tree->add_option("--ratio", flags.ratio, "target ratio a:b")->required();
    tree->add_option("--precision", flags.precision, "precision level");
    tree->add_option("--mode", flags.mode, "minmix|exact|pruned4");
    tree->add_option("--units", units, "units the root must deliver");
    tree->add_option("--budget", budget, "max expanded search states");
    tree->add_option("--format", tree_format, "text|json|dot");
    tree->add_option("--out", flags.out_dir, "output directory");

    CLI::App* assign = cli.add_subcommand("assign", "compute fluid volume assignments");
    add_io(assign);

    CLI::App* opt = cli.add_subcommand("optimize", "assign volumes and reuse leftovers");
    add_io(opt);
    opt->add_flag("--no-lof", no_lof, "skip leftover reuse");
    opt->add_option("--mode", flags.mode, "minmix|exact|pruned4");
    opt->add_option("--precision", flags.precision, "precision level");
    opt->add_option("--epsilon", flags.epsilon, "ratio tolerance p/q");
    opt->add_option("--format", flags.format, "json|dot|tsv");

    CLI::App* bench_cmd = cli.add_subcommand("bench", "run a built-in assay benchmark");
    bench_cmd->add_option("--case", case_name, "cca|paa|glucose")->required();
    bench_cmd->add_option("--mixer", mixer, "m1|m2|arbitrary");
    bench_cmd->add_option("--mode", flags.mode, "minmix|exact|pruned4");

    CLI::App* compare = cli.add_subcommand("compare", "compare minmix/exact/pruned4");
    compare->add_option("--seed", seed, "random seed");
    compare->add_option("--count", count, "number of random targets");
    compare->add_option("--precision", flags.precision, "target depth");
    compare->add_option("--budget", budget, "max expanded search states");

    CLI::App* export_dot = cli.add_subcommand("export-dot", "render a graph as DOT");
    add_io(export_dot);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return cli.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cli.got_subcommand(approx)) return cmd_approx(flags);
        if (cli.got_subcommand(tree)) return cmd_tree(flags, units, budget, tree_format);
        if (cli.got_subcommand(assign)) return cmd_assign(flags);
        if (cli.got_subcommand(opt)) return cmd_optimize(flags, no_lof);
        if (cli.got_subcommand(bench_cmd)) return cmd_bench(case_name, mixer, flags);
        if (cli.got_subcommand(compare)) return cmd_compare(seed, count, flags, budget);
        if (cli.got_subcommand(export_dot)) return cmd_export_dot(flags);
    } catch (const NotSatisfiableError& e) {
        std::cerr << "not satisfiable: " << e.what() << "\n";
        return kExitNotSatisfiable;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
