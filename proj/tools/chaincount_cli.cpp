#include <cstdint>
#include <fstream>
#include <memory>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chaincount/gradcheck.hpp"
#include "chaincount/io.hpp"
#include "chaincount/metrics.hpp"
#include "chaincount/partition.hpp"
#include "chaincount/postprocess.hpp"
#include "chaincount/refine.hpp"
#include "chaincount/synth.hpp"

using namespace chaincount;
using nlohmann::json;

namespace {

// Applies values from a JSON config file to options the user did not pass
// on the command line. Keys are the long option names without dashes.
class ConfigOverlay {
 public:
  ConfigOverlay(CLI::App* cmd, const std::string& path) : cmd_(cmd) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    in >> values_;
  }

  template <typename T>
  void apply(const std::string& key, T& target) {
    if (values_.is_null() || !values_.contains(key)) return;
    if (cmd_->count("--" + key) > 0) return;  // explicit flag wins
    target = values_.at(key).get<T>();
  }

 private:
  CLI::App* cmd_;
  json values_;
};

std::ostream& config_log() { return std::cerr << "config:"; }

Axis parse_axis(const std::string& s) {
  if (s == "x" || s == "X") return Axis::X;
  if (s == "y" || s == "Y") return Axis::Y;
  throw CLI::ValidationError("axis must be x or y");
}

ChainInstance instance_from_record(const ImageRecord& rec, const FocalParams& focal) {
  ChainInstance inst;
  for (const auto& d : rec.predictions) {
    inst.pred_centers.push_back(d.box.center());
    inst.pred_scores.push_back(d.score);
  }
  for (const auto& g : rec.ground_truth) inst.gt_centers.push_back(g.center());
  inst.axis = dominant_orientation(inst.pred_centers.empty() ? inst.gt_centers
                                                             : inst.pred_centers);
  inst.matching = hungarian(build_value_matrix(rec.predictions, rec.ground_truth, focal));
  return inst;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chaincount: matching, chain losses, post-processing and "
               "counting metrics for dense detection layouts"};
  app.require_subcommand(1);

  std::string input, output, config_path;
  bool strict = false;

  // ---- evaluate ----
  auto* eval_cmd = app.add_subcommand("evaluate", "compute counting/localization metrics");
  std::vector<int> game_levels{0, 1, 2, 3};
  std::string json_output;
  eval_cmd->add_option("--input,-i", input, "dataset (JSON lines)")->required();
  eval_cmd->add_option("--output,-o", output, "report file (default: stdout)");
  eval_cmd->add_option("--json-output", json_output, "machine-readable report file");
  eval_cmd->add_option("--game-levels", game_levels, "GAME grid levels");
  eval_cmd->add_flag("--strict", strict, "reject unknown dataset fields");
  eval_cmd->add_option("--config", config_path, "JSON config file");

  // ---- dedup ----
  auto* dedup_cmd = app.add_subcommand("dedup", "remove near-duplicate detections");
  double distance_threshold = 0.0, confidence_threshold = 0.26;
  dedup_cmd->add_option("--input,-i", input)->required();
  dedup_cmd->add_option("--output,-o", output)->required();
  dedup_cmd->add_option("--distance-threshold", distance_threshold,
                        "minimum center gap along the dominant axis (pixels)");
  dedup_cmd->add_option("--confidence-threshold", confidence_threshold,
                        "score cutoff applied before deduplication");
  dedup_cmd->add_flag("--strict", strict);
  dedup_cmd->add_option("--config", config_path);

  // ---- partition ----
  auto* part_cmd = app.add_subcommand("partition", "two-pass divide-and-conquer counting");
  double delta = 0.0, padding = 0.0, stitch_threshold = 1.0;
  std::string counter_kind = "oracle", counter_file;
  double noisy_jitter = 1.0, noisy_dropout = 0.0, noisy_duplicate = 0.0, noisy_fp = 0.0;
  std::uint64_t seed = 0;
  part_cmd->add_option("--input,-i", input)->required();
  part_cmd->add_option("--output,-o", output)->required();
  part_cmd->add_option("--delta", delta, "cluster gap threshold (pixels)");
  part_cmd->add_option("--padding", padding, "crop margin (pixels)");
  part_cmd->add_option("--stitch-threshold", stitch_threshold,
                       "dedup distance for stitched boundaries (pixels)");
  part_cmd->add_option("--counter", counter_kind, "oracle | noisy | file");
  part_cmd->add_option("--counter-file", counter_file,
                       "dataset of precomputed detections keyed by crop id");
  part_cmd->add_option("--jitter", noisy_jitter, "noisy counter: center jitter sigma");
  part_cmd->add_option("--dropout", noisy_dropout, "noisy counter: dropout rate");
  part_cmd->add_option("--duplicate", noisy_duplicate, "noisy counter: duplicate rate");
  part_cmd->add_option("--fp-rate", noisy_fp, "noisy counter: false positive rate");
  part_cmd->add_option("--seed", seed);
  part_cmd->add_flag("--strict", strict);
  part_cmd->add_option("--config", config_path);

  // ---- refine ----
  auto* refine_cmd = app.add_subcommand("refine", "descend the composite loss on one record");
  RefineConfig rcfg;
  std::string record_id;
  refine_cmd->add_option("--input,-i", input)->required();
  refine_cmd->add_option("--output,-o", output, "trace file (TSV; default: stdout)");
  refine_cmd->add_option("--record", record_id, "record id (default: first record)");
  refine_cmd->add_option("--steps", rcfg.steps);
  refine_cmd->add_option("--lr", rcfg.learning_rate);
  refine_cmd->add_option("--rematch-every", rcfg.rematch_every);
  refine_cmd->add_option("--lambda-cls", rcfg.weights.lambda_cls);
  refine_cmd->add_option("--lambda-loc", rcfg.weights.lambda_loc);
  refine_cmd->add_option("--lambda-neigh", rcfg.weights.lambda_neigh);
  refine_cmd->add_option("--seed", rcfg.seed);
  refine_cmd->add_flag("--strict", strict);
  refine_cmd->add_option("--config", config_path);

  // ---- synth ----
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic chain scenes");
  SceneSpec scene;
  CorruptionSpec corruption;
  corruption.score_model = {1.0, 0.0, 0.15, 0.1};  // perfect scores unless overridden
  int count = 1;
  std::string axis_str = "x";
  synth_cmd->add_option("--output,-o", output)->required();
  synth_cmd->add_option("--count", count, "number of records (seeds seed..seed+count-1)");
  synth_cmd->add_option("--width", scene.width);
  synth_cmd->add_option("--height", scene.height);
  synth_cmd->add_option("--clusters", scene.n_clusters);
  synth_cmd->add_option("--handles-min", scene.handles_min);
  synth_cmd->add_option("--handles-max", scene.handles_max);
  synth_cmd->add_option("--spacing", scene.spacing_mean);
  synth_cmd->add_option("--spacing-jitter", scene.spacing_jitter);
  synth_cmd->add_option("--gap", scene.inter_cluster_gap);
  synth_cmd->add_option("--axis", axis_str, "chain axis: x | y");
  synth_cmd->add_option("--handle-w", scene.handle_w);
  synth_cmd->add_option("--handle-h", scene.handle_h);
  synth_cmd->add_option("--seed", seed);
  synth_cmd->add_option("--jitter", corruption.center_jitter_sigma);
  synth_cmd->add_option("--dropout", corruption.dropout_rate);
  synth_cmd->add_option("--duplicate", corruption.duplicate_rate);
  synth_cmd->add_option("--fp-rate", corruption.false_positive_rate);
  synth_cmd->add_option("--score-true-mean", corruption.score_model.true_mean);
  synth_cmd->add_option("--score-true-spread", corruption.score_model.true_spread);
  synth_cmd->add_option("--score-false-mean", corruption.score_model.false_mean);
  synth_cmd->add_option("--score-false-spread", corruption.score_model.false_spread);
  synth_cmd->add_option("--config", config_path);

  // ---- gradcheck ----
  auto* grad_cmd = app.add_subcommand("gradcheck", "verify analytic gradients");
  int trials = 100;
  double tolerance = 1e-4, fd_step = 1e-5;
  LossWeights gweights;
  grad_cmd->add_option("--trials", trials);
  grad_cmd->add_option("--seed", seed);
  grad_cmd->add_option("--tolerance", tolerance);
  grad_cmd->add_option("--fd-step", fd_step);
  grad_cmd->add_option("--lambda-cls", gweights.lambda_cls);
  grad_cmd->add_option("--lambda-loc", gweights.lambda_loc);
  grad_cmd->add_option("--lambda-neigh", gweights.lambda_neigh);
  grad_cmd->add_option("--config", config_path);

  CLI11_PARSE(app, argc, argv);

  try {
    const ParseOptions popts{strict};

    if (eval_cmd->parsed()) {
      ConfigOverlay cfg(eval_cmd, config_path);
      cfg.apply("game-levels", game_levels);
      config_log() << " command=evaluate input=" << input << " strict=" << strict
                   << " game-levels=";
      for (int l : game_levels) std::cerr << l << ",";
      std::cerr << "\n";

      const auto records = read_dataset_file(input, popts);
      const MetricsReport report = evaluate(records, game_levels);
      const std::string text = render_report(report);
      if (output.empty())
        std::cout << text;
      else
        write_text(output, text);
      if (!json_output.empty()) {
        json j{{"mae", report.counts.mae},
               {"rmse", report.counts.rmse},
               {"images", report.counts.n_images}};
        for (const auto& [l, v] : report.game.per_level) j["game"][std::to_string(l)] = v;
        if (report.localization) {
          const auto& loc = *report.localization;
          j["localization"] = {{"mean_l2", loc.mean_l2},
                               {"mean_median_l2", loc.mean_median_l2},
                               {"mean_p95_l2", loc.mean_p95_l2},
                               {"precision", loc.precision},
                               {"recall", loc.recall},
                               {"f1", loc.f1},
                               {"macro_precision", loc.macro_precision},
                               {"macro_recall", loc.macro_recall},
                               {"mean_iou_matched", loc.mean_iou_matched},
                               {"images_with_matches", loc.images_with_matches}};
        }
        write_text(json_output, j.dump(2) + "\n");
      }
      return 0;
    }

    if (dedup_cmd->parsed()) {
      ConfigOverlay cfg(dedup_cmd, config_path);
      cfg.apply("distance-threshold", distance_threshold);
      cfg.apply("confidence-threshold", confidence_threshold);
      config_log() << " command=dedup input=" << input << " output=" << output
                   << " distance-threshold=" << distance_threshold
                   << " confidence-threshold=" << confidence_threshold << " strict=" << strict
                   << "\n";

      auto records = read_dataset_file(input, popts);
      const DedupConfig dcfg{distance_threshold, confidence_threshold};
      for (auto& rec : records) {
        auto kept = filter_by_confidence(rec.predictions, dcfg.confidence_threshold);
        if (kept.size() > 1) {
          std::vector<Point2D> centers;
          for (const auto& d : kept) centers.push_back(d.box.center());
          kept = dedup(kept, dcfg, dominant_orientation(centers));
        }
        rec.predictions = std::move(kept);
      }
      write_dataset_file(output, records);
      return 0;
    }

    if (part_cmd->parsed()) {
      ConfigOverlay cfg(part_cmd, config_path);
      cfg.apply("delta", delta);
      cfg.apply("padding", padding);
      cfg.apply("stitch-threshold", stitch_threshold);
      cfg.apply("counter", counter_kind);
      config_log() << " command=partition input=" << input << " output=" << output
                   << " delta=" << delta << " padding=" << padding
                   << " stitch-threshold=" << stitch_threshold << " counter=" << counter_kind
                   << " seed=" << seed << "\n";

      auto records = read_dataset_file(input, popts);
      std::unique_ptr<Counter> counter;
      if (counter_kind == "oracle") {
        counter = std::make_unique<OracleCounter>();
      } else if (counter_kind == "noisy") {
        CorruptionSpec nspec;
        nspec.center_jitter_sigma = noisy_jitter;
        nspec.dropout_rate = noisy_dropout;
        nspec.duplicate_rate = noisy_duplicate;
        nspec.false_positive_rate = noisy_fp;
        nspec.seed = seed;
        counter = std::make_unique<NoisyCounter>(nspec);
      } else if (counter_kind == "file") {
        if (counter_file.empty()) throw std::runtime_error("--counter file needs --counter-file");
        counter = std::make_unique<FileBackedCounter>(read_dataset_file(counter_file, popts));
      } else {
        throw std::runtime_error("unknown counter kind: " + counter_kind);
      }
      const PartitionConfig pcfg{delta, padding};
      const DedupConfig stitch{stitch_threshold, 0.0};
      for (auto& rec : records) {
        rec.predictions = two_pass_count(rec, *counter, pcfg, stitch);
      }
      write_dataset_file(output, records);
      return 0;
    }

    if (refine_cmd->parsed()) {
      ConfigOverlay cfg(refine_cmd, config_path);
      cfg.apply("steps", rcfg.steps);
      cfg.apply("lr", rcfg.learning_rate);
      cfg.apply("rematch-every", rcfg.rematch_every);
      cfg.apply("lambda-cls", rcfg.weights.lambda_cls);
      cfg.apply("lambda-loc", rcfg.weights.lambda_loc);
      cfg.apply("lambda-neigh", rcfg.weights.lambda_neigh);
      config_log() << " command=refine input=" << input << " steps=" << rcfg.steps
                   << " lr=" << rcfg.learning_rate << " rematch-every=" << rcfg.rematch_every
                   << " lambda-cls=" << rcfg.weights.lambda_cls
                   << " lambda-loc=" << rcfg.weights.lambda_loc
                   << " lambda-neigh=" << rcfg.weights.lambda_neigh << " seed=" << rcfg.seed
                   << "\n";

      const auto records = read_dataset_file(input, popts);
      if (records.empty()) throw std::runtime_error("empty dataset");
      const ImageRecord* rec = &records.front();
      if (!record_id.empty()) {
        rec = nullptr;
        for (const auto& r : records) {
          if (r.id == record_id) {
            rec = &r;
            break;
          }
        }
        if (!rec) throw std::runtime_error("record id not found: " + record_id);
      }

      const ChainInstance inst = instance_from_record(*rec, rcfg.focal);
      const RefineTrace trace = refine(inst, rcfg);
      std::ostringstream tsv;
      tsv << "step\tloc\tneigh\tcls\ttotal\n";
      for (std::size_t s = 0; s < trace.per_step.size(); ++s) {
        const auto& b = trace.per_step[s];
        tsv << s << '\t' << b.loc << '\t' << b.neigh << '\t' << b.cls << '\t' << b.total << '\n';
      }
      if (output.empty())
        std::cout << tsv.str();
      else
        write_text(output, tsv.str());
      std::cerr << "rematch_changes=" << trace.rematch_changes
                << " final_total=" << trace.per_step.back().total << "\n";
      return 0;
    }

    if (synth_cmd->parsed()) {
      ConfigOverlay cfg(synth_cmd, config_path);
      cfg.apply("count", count);
      cfg.apply("clusters", scene.n_clusters);
      cfg.apply("spacing", scene.spacing_mean);
      cfg.apply("gap", scene.inter_cluster_gap);
      scene.axis = parse_axis(axis_str);
      config_log() << " command=synth output=" << output << " count=" << count
                   << " clusters=" << scene.n_clusters << " spacing=" << scene.spacing_mean
                   << "+/-" << scene.spacing_jitter << " gap=" << scene.inter_cluster_gap
                   << " axis=" << axis_str << " seed=" << seed
                   << " jitter=" << corruption.center_jitter_sigma
                   << " dropout=" << corruption.dropout_rate
                   << " duplicate=" << corruption.duplicate_rate
                   << " fp-rate=" << corruption.false_positive_rate << "\n";

      std::vector<ImageRecord> records;
      for (int k = 0; k < count; ++k) {
        SceneSpec s = scene;
        s.seed = seed + static_cast<std::uint64_t>(k);
        CorruptionSpec c = corruption;
        c.seed = s.seed;
        records.push_back(corrupt(generate_scene(s), c));
      }
      write_dataset_file(output, records);
      return 0;
    }

    if (grad_cmd->parsed()) {
      ConfigOverlay cfg(grad_cmd, config_path);
      cfg.apply("trials", trials);
      cfg.apply("tolerance", tolerance);
      config_log() << " command=gradcheck trials=" << trials << " seed=" << seed
                   << " tolerance=" << tolerance << " fd-step=" << fd_step
                   << " lambda-cls=" << gweights.lambda_cls << " lambda-loc=" << gweights.lambda_loc
                   << " lambda-neigh=" << gweights.lambda_neigh << "\n";

      const GradCheckResult res = run_gradcheck(trials, seed, gweights, FocalParams{}, fd_step);
      std::cout << "max_rel_error: " << res.max_rel_error << "\n"
                << "checked: " << res.checked << "\n"
                << "skipped_kinks: " << res.skipped << "\n";
      if (res.max_rel_error >= tolerance) {
        std::cerr << "gradcheck FAILED (tolerance " << tolerance << ")\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
