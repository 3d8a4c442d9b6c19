/*
 * Copyright 2026 The auxsel Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "auxsel/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <ostream>

#include "auxsel/dseparation.hpp"
#include "auxsel/error.hpp"
#include "auxsel/graph_io.hpp"
#include "auxsel/identifiability.hpp"
#include "auxsel/io.hpp"
#include "auxsel/metrics.hpp"
#include "auxsel/scm.hpp"
#include "auxsel/selection.hpp"

namespace auxsel {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

NodeSet resolve_labels(const Dag& dag, const std::vector<std::string>& labels) {
    NodeSet out;
    for (const auto& l : labels) out.insert(dag.at(l));
    return out;
}

std::string rank_bundle_json(const ScmSpec& spec, const LatentPartition& p, std::uint64_t seed) {
    const std::size_t d = p.groups.size();
    json doc;
    doc["group_count"] = d;
    if (d == 0) {
        doc["note"] = "no unobserved nodes; nothing to check";
        return doc.dump(2) + "\n";
    }
    const std::size_t m = 4 * d;
    doc["samples"] = m;
    doc["seed"] = seed;
    const WMatrix w = spec.all_gaussian() ? gaussian_w_matrix(spec, p, m, seed) : density_w_matrix(spec, p, m, seed);
    doc["direct"] = json::parse(rank_report_to_json(check_rank_direct(w, d)));
    doc["subtracted"] = json::parse(rank_report_to_json(check_rank_subtracted(w, d)));
    return doc.dump(2) + "\n";
}

void require_parent_dir(const std::string& path) {
    const fs::path p(path);
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    if (!fs::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "output directory '" + dir.string() + "' does not exist");
    }
}

}  // namespace

PipelineBundle pipeline_run(const Dag& dag, const PipelineOptions& options) {
    PipelineBundle bundle;
    const SelectionReport selection = select(dag);
    const ScmSpec spec = random_spec(dag, options.seed);
    const SampleMatrix z = sample(spec, options.samples);
    const MixingSpec mix = random_mixing(options.mixing, dag.size(), options.seed, options.layers);
    const SampleMatrix x = forward(mix, z);
    const SampleMatrix z_hat = inverse(mix, x);
    const EvalReport report = evaluate(z, z_hat);

    bundle.files["graph.json"] = graph_to_json(dag) + "\n";
    bundle.files["selection.json"] = selection_to_json(dag, selection, true) + "\n";
    bundle.files["partition.json"] = partition_to_json(dag, selection.partition) + "\n";
    bundle.files["spec.json"] = spec_to_json(spec);
    bundle.files["mix.json"] = mixing_to_json(mix);
    bundle.files["z.csv"] = format_csv(z);
    bundle.files["x.csv"] = format_csv(x);
    bundle.files["zhat.csv"] = format_csv(z_hat);
    bundle.files["rank.json"] = rank_bundle_json(spec, selection.partition, options.seed);
    bundle.files["report.json"] = eval_report_to_json(report);
    return bundle;
}

void write_bundle(const PipelineBundle& bundle, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "'");
    }
    for (const auto& [name, content] : bundle.files) write_file_atomic(dir / name, content);
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Observable-source selection, simulation and identifiability checks over latent DAGs", "auxsel"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    const auto add_seed = [&seed](CLI::App* sub) {
        sub->add_option("--seed", seed, "random seed")->envname("AUXSEL_SEED");
    };

    std::string graph_path;
    const auto add_graph = [&graph_path](CLI::App* sub) {
        sub->add_option("--graph", graph_path, "graph JSON file")->required()->check(CLI::ExistingFile);
    };

    // dsep
    auto* dsep = app.add_subcommand("dsep", "test d-separation of two node sets");
    std::vector<std::string> set_a, set_b, given;
    add_graph(dsep);
    dsep->add_option("--a", set_a, "first node set (labels)")->required()->delimiter(',');
    dsep->add_option("--b", set_b, "second node set (labels)")->required()->delimiter(',');
    dsep->add_option("--given", given, "conditioning set (labels)")->delimiter(',');

    // partition
    auto* part = app.add_subcommand("partition", "group unobserved nodes given a conditioning set");
    add_graph(part);
    part->add_option("--given", given, "conditioning set (observed labels)")->delimiter(',');

    // select
    auto* sel = app.add_subcommand("select", "choose the conditioning subset of observed nodes");
    bool explain = false;
    bool no_prune = false;
    add_graph(sel);
    sel->add_flag("--explain", explain, "include the per-subset table");
    sel->add_flag("--no-prune", no_prune, "keep collider-only observed nodes as candidates");

    // simulate
    auto* sim = app.add_subcommand("simulate", "sample a random linear SCM over the graph");
    std::size_t n_samples = 100000;
    std::string out_path, spec_out, noise = "gaussian";
    add_graph(sim);
    add_seed(sim);
    sim->add_option("--n", n_samples, "sample size")->check(CLI::PositiveNumber);
    sim->add_option("--out", out_path, "CSV output")->required();
    sim->add_option("--spec-out", spec_out, "write the SCM spec JSON here");
    sim->add_option("--noise", noise, "noise family")->check(CLI::IsMember({"gaussian", "laplace"}));

    // mix
    auto* mixc = app.add_subcommand("mix", "apply a volume-preserving mixing (or its inverse)");
    std::string mix_spec, in_path, generate;
    std::size_t dim = 0, layers = 3;
    bool do_inverse = false;
    mixc->add_option("--spec", mix_spec, "mixing spec JSON (written when --generate is given)")->required();
    mixc->add_option("--in", in_path, "input CSV")->check(CLI::ExistingFile);
    mixc->add_option("--out", out_path, "output CSV");
    mixc->add_flag("--inverse", do_inverse, "apply the inverse map");
    mixc->add_option("--generate", generate, "create a new spec of this kind")
        ->check(CLI::IsMember({"special-orthogonal", "additive-coupling-stack"}));
    mixc->add_option("--dim", dim, "dimension for --generate");
    mixc->add_option("--layers", layers, "coupling layers for --generate")->check(CLI::PositiveNumber);
    add_seed(mixc);

    // check-rank
    auto* rank = app.add_subcommand("check-rank", "numerically check the derivative rank condition");
    std::string scm_spec, partition_path, variant = "direct";
    std::size_t samples = 0;
    double tol = kDefaultRankTolerance;
    double step = 1e-4;
    bool strict = false;
    add_graph(rank);
    add_seed(rank);
    rank->add_option("--spec", scm_spec, "SCM spec JSON")->required()->check(CLI::ExistingFile);
    rank->add_option("--partition", partition_path, "partition JSON (default: the selected one)")
        ->check(CLI::ExistingFile);
    rank->add_option("--variant", variant, "direct or subtracted")->check(CLI::IsMember({"direct", "subtracted"}));
    rank->add_option("--samples", samples, "conditioning samples M (default 4d)");
    rank->add_option("--tol", tol, "relative singular-value threshold")->check(CLI::PositiveNumber);
    rank->add_option("--fd-step", step, "finite-difference step for non-Gaussian specs")->check(CLI::PositiveNumber);
    rank->add_option("--out", out_path, "write the report here instead of stdout");
    rank->add_flag("--strict", strict, "exit 1 when the verdict is 'violated'");

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "score estimated latents against the truth");
    std::string true_path, est_path;
    eval->add_option("--true", true_path, "true latents CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("--est", est_path, "estimated latents CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("--out", out_path, "write the report here instead of stdout");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "run select, simulate, mix, rank check and evaluate");
    std::string out_dir, mixing_kind = "additive-coupling-stack";
    add_graph(pipe);
    add_seed(pipe);
    pipe->add_option("--n", n_samples, "sample size")->check(CLI::PositiveNumber);
    pipe->add_option("--out-dir", out_dir, "bundle directory")->required();
    pipe->add_option("--mixing", mixing_kind, "mixing kind")
        ->check(CLI::IsMember({"special-orthogonal", "additive-coupling-stack"}));
    pipe->add_option("--layers", layers, "coupling layers")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsageError;
    }

    try {
        if (dsep->parsed()) {
            const Dag dag = load_graph(graph_path);
            const bool sep = d_separated(dag, resolve_labels(dag, set_a), resolve_labels(dag, set_b),
                                         resolve_labels(dag, given));
            out << "d-separated: " << (sep ? "true" : "false") << "\n";
        } else if (part->parsed()) {
            const Dag dag = load_graph(graph_path);
            out << partition_to_json(dag, partition(dag, resolve_labels(dag, given))) << "\n";
        } else if (sel->parsed()) {
            const Dag dag = load_graph(graph_path);
            const SelectionReport report = select(dag, SelectOptions{.prune = !no_prune});
            out << selection_to_json(dag, report, explain) << "\n";
        } else if (sim->parsed()) {
            const Dag dag = load_graph(graph_path);
            require_parent_dir(out_path);
            if (!spec_out.empty()) require_parent_dir(spec_out);
            const ScmSpec spec = random_spec(dag, seed, parse_noise_family(noise));
            const std::string csv = format_csv(sample(spec, n_samples));
            const std::string spec_json = spec_to_json(spec);
            write_file_atomic(out_path, csv);
            if (!spec_out.empty()) write_file_atomic(spec_out, spec_json);
        } else if (mixc->parsed()) {
            MixingSpec spec;
            if (!generate.empty()) {
                if (dim == 0) throw Error(ErrorCode::InvalidArgument, "--generate needs --dim");
                require_parent_dir(mix_spec);
                spec = random_mixing(parse_mixing_kind(generate), dim, seed, layers);
            } else {
                spec = parse_mixing_json(read_text_file(mix_spec));
            }
            if (in_path.empty() != out_path.empty()) {
                throw Error(ErrorCode::InvalidArgument, "--in and --out go together");
            }
            std::string csv;
            if (!in_path.empty()) {
                require_parent_dir(out_path);
                const SampleMatrix input = load_csv(in_path);
                csv = format_csv(do_inverse ? inverse(spec, input) : forward(spec, input));
            } else if (generate.empty()) {
                throw Error(ErrorCode::InvalidArgument, "nothing to do: pass --in/--out or --generate");
            }
            if (!generate.empty()) write_file_atomic(mix_spec, mixing_to_json(spec));
            if (!csv.empty()) write_file_atomic(out_path, csv);
        } else if (rank->parsed()) {
            const Dag dag = load_graph(graph_path);
            if (!out_path.empty()) require_parent_dir(out_path);
            const ScmSpec spec = parse_spec_json(dag, read_text_file(scm_spec));
            const LatentPartition p = partition_path.empty() ? select(dag).partition
                                                             : parse_partition_json(dag, read_text_file(partition_path));
            const std::size_t d = p.groups.size();
            const std::size_t m = samples == 0 ? 4 * d : samples;
            const WMatrix w = spec.all_gaussian() ? gaussian_w_matrix(spec, p, m, seed)
                                                  : density_w_matrix(spec, p, m, seed, step);
            const RankReport report = parse_rank_variant(variant) == RankVariant::Direct
                                          ? check_rank_direct(w, d, tol)
                                          : check_rank_subtracted(w, d, tol);
            const std::string text = rank_report_to_json(report);
            if (out_path.empty()) {
                out << text;
            } else {
                write_file_atomic(out_path, text);
            }
            if (strict && !report.satisfied) {
                err << "rank condition violated\n";
                return kExitDomainError;
            }
        } else if (eval->parsed()) {
            if (!out_path.empty()) require_parent_dir(out_path);
            const EvalReport report = evaluate(load_csv(true_path), load_csv(est_path));
            const std::string text = eval_report_to_json(report);
            if (out_path.empty()) {
                out << text;
            } else {
                write_file_atomic(out_path, text);
            }
        } else if (pipe->parsed()) {
            const Dag dag = load_graph(graph_path);
            PipelineOptions options;
            options.seed = seed;
            options.samples = n_samples;
            options.mixing = parse_mixing_kind(mixing_kind);
            options.layers = layers;
            write_bundle(pipeline_run(dag, options), out_dir);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_usage_error(e.code()) ? kExitUsageError : kExitDomainError;
    }
    return kExitOk;
}

}  // namespace auxsel
