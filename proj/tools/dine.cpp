// Command-line front end: wires graph ingestion, embedding training,
// attribution, interpretability metrics, retrofitting and link-prediction
// evaluation into reproducible pipelines. Every artifact-producing command
// writes a manifest with the exact invocation, resolved configuration,
// seed and input digests next to its primary output.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "dine/attribution.hpp"
#include "dine/embedding.hpp"
#include "dine/graph.hpp"
#include "dine/interp.hpp"
#include "dine/linkpred.hpp"
#include "dine/manifest.hpp"
#include "dine/random.hpp"
#include "dine/retrofit.hpp"
#include "dine/sgns.hpp"
#include "dine/splits.hpp"
#include "dine/version.hpp"

namespace {

using nlohmann::json;

int run_cli(const std::vector<std::string>& args);

// Shared per-invocation state.
struct CommandContext {
  std::vector<std::string> argv;
  bool force = false;

  void require_writable(const std::string& path) const {
    if (!force && std::filesystem::exists(path))
      throw std::runtime_error("output exists (use --force to overwrite): " +
                               path);
  }

  void emit_manifest(const std::string& command, const json& config,
                     std::uint64_t seed,
                     const std::vector<std::string>& inputs,
                     const std::string& primary_output) const {
    dine::RunManifest manifest;
    manifest.command = command;
    manifest.argv = argv;
    manifest.config_json = config.dump();
    manifest.seed = seed;
    for (const auto& path : inputs)
      manifest.input_hashes[path] = dine::file_digest(path);
    manifest.tool_version = dine::kToolVersion;
    dine::write_manifest(manifest, dine::manifest_path_for(primary_output));
  }
};

void add_generate(CLI::App& app, CommandContext& ctx) {
  auto* cmd =
      app.add_subcommand("generate-sbm", "Draw a stochastic block model graph");
  auto cfg = std::make_shared<dine::SbmConfig>();
  auto out_edges = std::make_shared<std::string>();
  auto out_comms = std::make_shared<std::string>();
  cmd->add_option("--blocks", cfg->num_blocks, "Number of blocks")
      ->default_val(8);
  cmd->add_option("--block-size", cfg->block_size, "Nodes per block")
      ->default_val(10);
  cmd->add_option("--intra", cfg->intra_prob, "Intra-block edge probability")
      ->default_val(1.0);
  cmd->add_option("--inter", cfg->inter_prob, "Inter-block edge probability")
      ->default_val(0.0);
  cmd->add_option("--seed", cfg->seed, "Generator seed")->default_val(0);
  cmd->add_option("--out-edges", *out_edges, "Edge list output")->required();
  cmd->add_option("--out-communities", *out_comms, "Block membership output")
      ->required();

  cmd->callback([&ctx, cfg, out_edges, out_comms] {
    ctx.require_writable(*out_edges);
    ctx.require_writable(*out_comms);
    auto [graph, communities] = dine::generate_sbm(*cfg);
    dine::save_edge_list(graph, *out_edges);
    dine::save_communities(graph, communities, *out_comms);
    ctx.emit_manifest("generate-sbm",
                      json{{"blocks", cfg->num_blocks},
                           {"block_size", cfg->block_size},
                           {"intra", cfg->intra_prob},
                           {"inter", cfg->inter_prob},
                           {"out_edges", *out_edges},
                           {"out_communities", *out_comms}},
                      cfg->seed, {}, *out_edges);
  });
}

void add_embed(CLI::App& app, CommandContext& ctx) {
  auto* cmd = app.add_subcommand(
      "embed", "Train a random-walk skip-gram embedding on an edge list");
  auto edges = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto walk = std::make_shared<dine::WalkConfig>();
  auto sgns = std::make_shared<dine::SgnsConfig>();
  auto seed = std::make_shared<std::uint64_t>(0);
  cmd->add_option("--edges", *edges, "Input edge list")->required();
  cmd->add_option("--dim", sgns->dim, "Embedding dimensions")->default_val(128);
  cmd->add_option("--walk-length", walk->walk_length, "Nodes per walk")
      ->default_val(10);
  cmd->add_option("--num-walks", walk->num_walks, "Walks per node")
      ->default_val(20);
  cmd->add_option("--window", walk->window, "Co-occurrence window")
      ->default_val(5);
  cmd->add_option("--epochs", sgns->epochs, "Training epochs")->default_val(5);
  cmd->add_option("--negatives", sgns->negatives_per_positive,
                  "Negative samples per positive pair")
      ->default_val(5);
  cmd->add_option("--lr", sgns->initial_lr, "Initial learning rate")
      ->default_val(0.025);
  cmd->add_option("--min-lr", sgns->min_lr, "Final learning rate")
      ->default_val(1e-4);
  cmd->add_option("--seed", *seed, "Run seed")->default_val(0);
  cmd->add_option("--out", *out, "Embedding output (word2vec text)")
      ->required();

  cmd->callback([&ctx, edges, out, walk, sgns, seed] {
    ctx.require_writable(*out);
    const dine::Graph graph = dine::load_edge_list(*edges);
    walk->seed = dine::derive_seed(*seed, "walks");
    sgns->seed = dine::derive_seed(*seed, "sgns");
    dine::save_embedding(dine::deepwalk(graph, *walk, *sgns), *out);
    ctx.emit_manifest("embed",
                      json{{"edges", *edges},
                           {"dim", sgns->dim},
                           {"walk_length", walk->walk_length},
                           {"num_walks", walk->num_walks},
                           {"window", walk->window},
                           {"epochs", sgns->epochs},
                           {"negatives", sgns->negatives_per_positive},
                           {"lr", sgns->initial_lr},
                           {"min_lr", sgns->min_lr},
                           {"out", *out}},
                      *seed, {*edges}, *out);
  });
}

void add_retrofit(CLI::App& app, CommandContext& ctx) {
  auto* cmd = app.add_subcommand(
      "retrofit", "Retrofit an embedding into the interpretable unit cube");
  auto input = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto trace = std::make_shared<std::string>();
  auto cfg = std::make_shared<dine::RetrofitConfig>();
  auto no_orth = std::make_shared<bool>(false);
  auto no_size = std::make_shared<bool>(false);
  auto sgd = std::make_shared<bool>(false);
  cmd->add_option("--embedding", *input, "Input embedding")->required();
  cmd->add_option("--hidden-dim", cfg->hidden_dim,
                  "Hidden (output) dimensions")
      ->default_val(128);
  cmd->add_option("--iters", cfg->iterations, "Training iterations")
      ->default_val(2000);
  cmd->add_option("--lr", cfg->learning_rate, "Learning rate")
      ->default_val(0.1);
  cmd->add_flag("--no-orth", *no_orth, "Drop the orthogonality term");
  cmd->add_flag("--no-size", *no_size, "Drop the size-entropy term");
  cmd->add_flag("--sgd", *sgd, "Plain gradient descent instead of adam");
  cmd->add_option("--seed", cfg->seed, "Run seed")->default_val(0);
  cmd->add_option("--out", *out, "Retrofitted embedding output")->required();
  cmd->add_option("--trace", *trace, "Loss trace CSV output");

  cmd->callback([&ctx, input, out, trace, cfg, no_orth, no_size, sgd] {
    if (cfg->hidden_dim < 2)
      throw std::invalid_argument("--hidden-dim must be >= 2");
    ctx.require_writable(*out);
    if (!trace->empty()) ctx.require_writable(*trace);
    cfg->use_orth = !*no_orth;
    cfg->use_size = !*no_size;
    cfg->optimizer = *sgd ? dine::Optimizer::sgd : dine::Optimizer::adam;
    const dine::EmbeddingMatrix x = dine::load_embedding(*input);
    const dine::RetrofitResult result = dine::train_retrofit(x, *cfg);
    dine::save_embedding(result.hidden, *out);
    if (!trace->empty()) dine::save_loss_trace(result.trace, *trace);
    ctx.emit_manifest("retrofit",
                      json{{"embedding", *input},
                           {"hidden_dim", cfg->hidden_dim},
                           {"iters", cfg->iterations},
                           {"lr", cfg->learning_rate},
                           {"use_orth", cfg->use_orth},
                           {"use_size", cfg->use_size},
                           {"optimizer", *sgd ? "sgd" : "adam"},
                           {"out", *out},
                           {"trace", *trace}},
                      cfg->seed, {*input}, *out);
  });
}

void add_explain(CLI::App& app, CommandContext& ctx) {
  auto* cmd = app.add_subcommand(
      "explain", "Attribute edge reconstruction to embedding dimensions");
  auto edges = std::make_shared<std::string>();
  auto embedding = std::make_shared<std::string>();
  auto kind = std::make_shared<std::string>("marginal");
  auto out_saliency = std::make_shared<std::string>();
  auto out_subgraphs = std::make_shared<std::string>();
  auto out_negative = std::make_shared<std::string>();
  auto per_dim = std::make_shared<bool>(false);
  cmd->add_option("--edges", *edges, "Input edge list")->required();
  cmd->add_option("--embedding", *embedding, "Input embedding")->required();
  cmd->add_option("--kind", *kind, "Scoring kind")
      ->check(CLI::IsMember({"marginal", "shapley"}))
      ->default_val("marginal");
  cmd->add_option("--out-saliency", *out_saliency, "Saliency TSV output")
      ->required();
  cmd->add_option("--out-subgraphs", *out_subgraphs,
                  "Explanation subgraph JSON output")
      ->required();
  cmd->add_option("--out-negative-subgraphs", *out_negative,
                  "Negative-utility subgraph JSON output");
  cmd->add_flag("--per-dim-norm", *per_dim,
                "Normalize saliency per dimension instead of globally");

  cmd->callback([&ctx, edges, embedding, kind, out_saliency, out_subgraphs,
                 out_negative, per_dim] {
    ctx.require_writable(*out_saliency);
    ctx.require_writable(*out_subgraphs);
    if (!out_negative->empty()) ctx.require_writable(*out_negative);
    const dine::Graph graph = dine::load_edge_list(*edges);
    const dine::EmbeddingMatrix x =
        dine::align_to_graph(dine::load_embedding(*embedding), graph);
    const dine::ScoringKind scoring = *kind == "shapley"
                                          ? dine::ScoringKind::shapley
                                          : dine::ScoringKind::marginal;
    const dine::UtilityTable table = dine::utility_table(graph, x, scoring);
    dine::export_saliency(table, *out_saliency, *per_dim);
    dine::save_subgraphs_json(dine::explanation_subgraphs(table),
                              *out_subgraphs);
    if (!out_negative->empty())
      dine::save_subgraphs_json(dine::negative_subgraphs(table),
                                *out_negative);
    ctx.emit_manifest("explain",
                      json{{"edges", *edges},
                           {"embedding", *embedding},
                           {"kind", *kind},
                           {"per_dim_norm", *per_dim},
                           {"out_saliency", *out_saliency},
                           {"out_subgraphs", *out_subgraphs},
                           {"out_negative_subgraphs", *out_negative}},
                      0, {*edges, *embedding}, *out_saliency);
  });
}

void add_metrics(CLI::App& app, CommandContext& ctx) {
  auto* cmd = app.add_subcommand(
      "metrics", "Score per-dimension interpretability of an embedding");
  auto edges = std::make_shared<std::string>();
  auto embedding = std::make_shared<std::string>();
  auto communities = std::make_shared<std::string>();
  auto use_louvain = std::make_shared<bool>(false);
  auto coverage = std::make_shared<double>(0.9);
  auto rank_by = std::make_shared<std::string>("coverage");
  auto seed = std::make_shared<std::uint64_t>(0);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--edges", *edges, "Input edge list")->required();
  cmd->add_option("--embedding", *embedding, "Input embedding")->required();
  cmd->add_option("--communities", *communities,
                  "Ground-truth community file");
  cmd->add_flag("--louvain", *use_louvain,
                "Detect communities instead of reading them");
  cmd->add_option("--coverage", *coverage,
                  "Edge coverage for the effective dimensions")
      ->default_val(0.9);
  cmd->add_option("--rank-by", *rank_by,
                  "Effective-dimension ranking criterion")
      ->check(CLI::IsMember({"coverage", "score"}))
      ->default_val("coverage");
  cmd->add_option("--seed", *seed, "Seed for community detection")
      ->default_val(0);
  cmd->add_option("--out", *out, "Report JSON output")->required();

  cmd->callback([&ctx, edges, embedding, communities, use_louvain, coverage,
                 rank_by, seed, out] {
    if (communities->empty() == !*use_louvain)
      throw std::invalid_argument(
          "provide exactly one of --communities or --louvain");
    ctx.require_writable(*out);
    const dine::Graph graph = dine::load_edge_list(*edges);
    const dine::EmbeddingMatrix x =
        dine::align_to_graph(dine::load_embedding(*embedding), graph);
    const dine::CommunityAssignment assignment =
        *use_louvain
            ? dine::louvain(graph, dine::derive_seed(*seed, "louvain"))
            : dine::load_communities(graph, *communities);
    const dine::EdgePartition partition =
        dine::edge_partition(graph, assignment);
    const dine::InterpretabilityReport report = dine::interpretability_report(
        graph, x, partition, *coverage,
        *rank_by == "score" ? dine::EffectiveRanking::score
                            : dine::EffectiveRanking::coverage);
    dine::save_report_json(report, *out);
    std::vector<std::string> inputs{*edges, *embedding};
    if (!communities->empty()) inputs.push_back(*communities);
    ctx.emit_manifest("metrics",
                      json{{"edges", *edges},
                           {"embedding", *embedding},
                           {"communities", *communities},
                           {"louvain", *use_louvain},
                           {"coverage", *coverage},
                           {"rank_by", *rank_by},
                           {"out", *out}},
                      *seed, inputs, *out);
  });
}

void add_linkpred(CLI::App& app, CommandContext& ctx) {
  auto* cmd = app.add_subcommand(
      "linkpred", "Held-out link prediction with the delta scorer");
  auto edges = std::make_shared<std::string>();
  auto method = std::make_shared<std::string>("deepwalk");
  auto cfg = std::make_shared<dine::LinkpredConfig>();
  auto hidden_dim = std::make_shared<int>(0);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--edges", *edges, "Input edge list")->required();
  cmd->add_option("--method", *method, "Embedding method")
      ->check(CLI::IsMember({"deepwalk", "dine"}))
      ->default_val("deepwalk");
  cmd->add_option("--holdout", cfg->holdout_fraction, "Held-out edge fraction")
      ->default_val(0.1);
  cmd->add_option("--seeds", cfg->num_seeds, "Number of training runs")
      ->default_val(5);
  cmd->add_option("--seed", cfg->base_seed, "Base seed (run i adds i)")
      ->default_val(0);
  cmd->add_option("--dim", cfg->sgns.dim, "Embedding dimensions")
      ->default_val(128);
  cmd->add_option("--hidden-dim", *hidden_dim,
                  "Retrofit output dimensions (defaults to --dim)");
  cmd->add_option("--walk-length", cfg->walk.walk_length, "Nodes per walk")
      ->default_val(10);
  cmd->add_option("--num-walks", cfg->walk.num_walks, "Walks per node")
      ->default_val(20);
  cmd->add_option("--window", cfg->walk.window, "Co-occurrence window")
      ->default_val(5);
  cmd->add_option("--epochs", cfg->sgns.epochs, "Embedding epochs")
      ->default_val(5);
  cmd->add_option("--iters", cfg->retrofit.iterations, "Retrofit iterations")
      ->default_val(2000);
  cmd->add_option("--lr", cfg->retrofit.learning_rate,
                  "Retrofit learning rate")
      ->default_val(0.1);
  cmd->add_option("--out", *out, "Summary JSON output")->required();

  cmd->callback([&ctx, edges, method, cfg, hidden_dim, out] {
    ctx.require_writable(*out);
    const dine::Graph graph = dine::load_edge_list(*edges);
    cfg->method = *method == "dine" ? dine::LinkpredMethod::dine
                                    : dine::LinkpredMethod::deepwalk;
    cfg->retrofit.hidden_dim = *hidden_dim > 0 ? *hidden_dim : cfg->sgns.dim;
    const dine::LinkpredSummary summary = dine::linkpred_experiment(graph, *cfg);
    dine::save_linkpred_json(summary, *out);
    ctx.emit_manifest("linkpred",
                      json{{"edges", *edges},
                           {"method", *method},
                           {"holdout", cfg->holdout_fraction},
                           {"seeds", cfg->num_seeds},
                           {"dim", cfg->sgns.dim},
                           {"hidden_dim", cfg->retrofit.hidden_dim},
                           {"walk_length", cfg->walk.walk_length},
                           {"num_walks", cfg->walk.num_walks},
                           {"window", cfg->walk.window},
                           {"epochs", cfg->sgns.epochs},
                           {"iters", cfg->retrofit.iterations},
                           {"lr", cfg->retrofit.learning_rate},
                           {"out", *out}},
                      cfg->base_seed, {*edges}, *out);
  });
}

void add_perturb(CLI::App& app, CommandContext& ctx) {
  auto* cmd = app.add_subcommand(
      "perturb", "Multiply embedding entries by log-normal noise");
  auto input = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto delta = std::make_shared<double>(0.5);
  auto seed = std::make_shared<std::uint64_t>(0);
  cmd->add_option("--embedding", *input, "Input embedding")->required();
  cmd->add_option("--delta", *delta, "Noise level (std of the exponent)")
      ->default_val(0.5);
  cmd->add_option("--seed", *seed, "Run seed")->default_val(0);
  cmd->add_option("--out", *out, "Perturbed embedding output")->required();

  cmd->callback([&ctx, input, out, delta, seed] {
    if (*delta < 0.0) throw std::invalid_argument("--delta must be >= 0");
    ctx.require_writable(*out);
    const dine::EmbeddingMatrix x = dine::load_embedding(*input);
    dine::save_embedding(
        dine::perturb_embeddings(x, *delta, dine::derive_seed(*seed, "noise")),
        *out);
    ctx.emit_manifest(
        "perturb",
        json{{"embedding", *input}, {"delta", *delta}, {"out", *out}}, *seed,
        {*input}, *out);
  });
}

void add_rerun(CLI::App& app, CommandContext&) {
  auto* cmd =
      app.add_subcommand("rerun", "Re-execute a command from its manifest");
  auto manifest_path = std::make_shared<std::string>();
  auto force = std::make_shared<bool>(false);
  cmd->add_option("--manifest", *manifest_path, "Manifest JSON")->required();
  cmd->add_flag("--force", *force, "Overwrite the recorded outputs");

  cmd->callback([manifest_path, force] {
    const dine::RunManifest manifest = dine::read_manifest(*manifest_path);
    std::vector<std::string> args = manifest.argv;
    if (*force) args.push_back("--force");
    const int code = run_cli(args);
    if (code != 0)
      throw std::runtime_error("rerun failed with exit code " +
                               std::to_string(code));
  });
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Node-embedding dimension explanations, interpretability "
               "metrics and interpretable retrofitting"};
  app.set_version_flag("--version", dine::kToolVersion);
  app.set_config("--config", "", "Read defaults from an INI file");
  app.require_subcommand(1);

  CommandContext ctx;
  ctx.argv = args;
  app.add_flag("--force", ctx.force, "Overwrite existing outputs");

  add_generate(app, ctx);
  add_embed(app, ctx);
  add_retrofit(app, ctx);
  add_explain(app, ctx);
  add_metrics(app, ctx);
  add_linkpred(app, ctx);
  add_perturb(app, ctx);
  add_rerun(app, ctx);
  // lets global flags like --force trail the subcommand arguments
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    // CLI11 parses back-to-front; hand it a reversed copy.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args);
}
