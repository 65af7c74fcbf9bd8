#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ugir/core/config.hpp"
#include "ugir/core/scribbles.hpp"
#include "ugir/core/ugstack.hpp"
#include "ugir/geodesic/geodesic.hpp"
#include "ugir/metrics/metrics.hpp"
#include "ugir/pipeline/refine.hpp"
#include "ugir/pipeline/session.hpp"
#include "ugir/pipeline/simulate.hpp"
#include "ugir/pipeline/synthetic.hpp"
#include "ugir/service/http_server.hpp"
#include "ugir/uncertainty/uncertainty.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ugir;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  if (const auto dir = fs::path(path).parent_path(); !dir.empty()) fs::create_directories(dir);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

RefineConfig load_config(const std::string& path) {
  RefineConfig cfg;
  if (!path.empty()) read_json(path).get_to(cfg);
  cfg.validate();
  return cfg;
}

// A float map tagged with what it holds. The mean map shares the
// uncertainty container layout.
void write_map(const Volume<double>& map, const Spacing& spacing, const std::string& what, const std::string& path) {
  RawArray a = encode_uncertainty(map, spacing);
  a.header.extra["map"] = what;
  write_raw(a, path);
}

// Mean foreground probability from either a probability group (fused on the
// fly) or a single map written by `fuse --out-mean`.
Volume<double> read_probability(const std::string& path, double threshold) {
  const RawArray a = read_raw(path);
  if (a.header.kind == ArrayKind::probgroup) return fuse_predictions(decode_probability_group(a), threshold).mean;
  return decode_uncertainty(a);
}

ScribbleSet read_scribbles(const std::string& path, int slice) {
  ScribbleSet s = read_json(path).get<ScribbleSet>();
  s.slice_index = slice;
  return s;
}

void require_slice(int k, const Shape3& shape) {
  if (k < 0 || k >= shape.slices)
    throw InvalidInput("slice " + std::to_string(k) + " out of range for " + to_string(shape));
}

service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty-guided interactive refinement of slice stacks"};
  app.require_subcommand(1);

  // fuse
  std::string probs_path, mean_out, var_out, mask_out;
  double threshold = 0.5;
  auto* fuse = app.add_subcommand("fuse", "Fuse a probability group into mean, variance and mask");
  fuse->add_option("--probs", probs_path, "Probability group")->required();
  fuse->add_option("--out-mean", mean_out, "Mean probability map");
  fuse->add_option("--out-var", var_out, "Variance map");
  fuse->add_option("--out-mask", mask_out, "Thresholded mask");
  fuse->add_option("--threshold", threshold)->capture_default_str();

  // rank
  std::string var_path, rank_mask_path, mode = "normalized";
  double fraction = 0.6, zeta = 1e-6;
  bool rank_json = false;
  auto* rank = app.add_subcommand("rank", "Rank slices by uncertainty");
  rank->add_option("--var", var_path, "Variance map")->required();
  rank->add_option("--mask", rank_mask_path, "Fused mask")->required();
  rank->add_option("--mode", mode)->check(CLI::IsMember({"normalized", "naive"}))->capture_default_str();
  rank->add_option("--fraction", fraction)->capture_default_str();
  rank->add_option("--zeta", zeta)->capture_default_str();
  rank->add_flag("--json", rank_json, "Print the queue as JSON");

  // geodesic
  std::string image_path, scribbles_path, eta_out;
  int slice = 0;
  double gamma = 1.0, D = 4.0;
  auto* geo = app.add_subcommand("geodesic", "Geodesic interaction likelihood for one slice");
  geo->add_option("--image", image_path, "Intensity stack")->required();
  geo->add_option("--slice", slice)->required();
  geo->add_option("--scribbles", scribbles_path, "Scribble JSON")->required();
  geo->add_option("--gamma", gamma)->capture_default_str();
  geo->add_option("--D", D)->capture_default_str();
  geo->add_option("--out-eta", eta_out)->required();

  // refine
  std::string prob_path, refine_mask_path, config_path, refine_out;
  auto* refine = app.add_subcommand("refine", "Refine one slice from scribbles");
  refine->add_option("--image", image_path)->required();
  refine->add_option("--prob", prob_path, "Probability group or mean map")->required();
  refine->add_option("--mask", refine_mask_path, "Current mask stack")->required();
  refine->add_option("--slice", slice)->required();
  refine->add_option("--scribbles", scribbles_path)->required();
  refine->add_option("--config", config_path);
  refine->add_option("--out", refine_out, "Updated mask stack")->required();

  // eval
  std::string pred_path, gt_path, eval_var_path;
  std::optional<double> ueo_threshold;
  bool eval_json = false;
  auto* eval = app.add_subcommand("eval", "Per-slice and aggregate metrics");
  eval->add_option("--pred", pred_path)->required();
  eval->add_option("--gt", gt_path)->required();
  eval->add_option("--var", eval_var_path);
  eval->add_option("--ueo-threshold", ueo_threshold);
  eval->add_flag("--json", eval_json);

  // session
  std::string session_probs, session_gt, session_mode = "simulated", session_out, log_path;
  std::string schedule = "normalized";
  bool no_early_stop = false;
  int max_rounds = 2;
  auto* session = app.add_subcommand("session", "Run a full refinement session");
  session->add_option("--image", image_path)->required();
  session->add_option("--probs", session_probs)->required();
  session->add_option("--gt", session_gt);
  session->add_option("--mode", session_mode)->check(CLI::IsMember({"simulated"}))->capture_default_str();
  session->add_option("--schedule", schedule)
      ->check(CLI::IsMember({"normalized", "naive", "sequential"}))
      ->capture_default_str();
  session->add_flag("--no-early-stop", no_early_stop);
  session->add_option("--max-rounds", max_rounds)->capture_default_str();
  session->add_option("--config", config_path);
  session->add_option("--out", session_out, "Final mask")->required();
  session->add_option("--log", log_path, "Session log JSON");

  // synth
  std::string spec_path, out_dir;
  std::uint64_t seed = 7;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic benchmark stack");
  synth->add_option("--spec", spec_path);
  synth->add_option("--seed", seed)->capture_default_str();
  synth->add_option("--out-dir", out_dir)->required();

  // serve
  std::string host = "127.0.0.1", data_dir;
  int port = 8080, idle_timeout = 3600;
  auto* serve = app.add_subcommand("serve", "Serve the session API over HTTP");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Persist sessions here and resume them on start");
  serve->add_option("--idle-timeout", idle_timeout, "Seconds")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fuse) {
      const auto group = read_probability_group(probs_path);
      const Spacing spacing = decode_spacing(read_raw(probs_path).header);
      const auto fused = fuse_predictions(group, threshold);
      if (!mean_out.empty()) write_map(fused.mean, spacing, "mean", mean_out);
      if (!var_out.empty()) write_map(fused.variance, spacing, "variance", var_out);
      if (!mask_out.empty()) write_mask(fused.mask, spacing, mask_out);
    } else if (*rank) {
      const auto var = read_uncertainty(var_path);
      const auto mask = read_mask(rank_mask_path);
      if (var.shape() != mask.shape()) throw InvalidInput("variance and mask dims differ");
      std::vector<double> scores(static_cast<std::size_t>(var.slices()));
      for (int k = 0; k < var.slices(); ++k) {
        scores[static_cast<std::size_t>(k)] = mode == "naive"
                                                  ? naive_slice_uncertainty(var.slice_values(k))
                                                  : slice_uncertainty(var.slice_values(k), mask.slice_values(k), zeta);
      }
      const auto queue = make_queue(scores, fraction);
      if (rank_json) {
        json j = json::array();
        for (const auto& e : queue.entries) j.push_back({{"slice", e.slice}, {"score", e.score}});
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "M=" << queue.size() << " M'=" << queue.cutoff << "\n";
        for (const auto& e : queue.entries) std::cout << e.slice << "\t" << e.score << "\n";
      }
    } else if (*geo) {
      const auto stack = read_stack(image_path);
      require_slice(slice, stack.shape());
      const ImageD intensity = normalized_slice(stack, slice);
      const auto seeds = rasterize_scribbles(read_scribbles(scribbles_path, slice), intensity.rows(), intensity.cols());
      const auto eta = likelihood_from_seeds(intensity, seeds, gamma, D);
      Volume<double> out({1, intensity.rows(), intensity.cols()});
      out.set_slice(0, eta.eta);
      write_map(out, stack.spacing, "eta", eta_out);
    } else if (*refine) {
      const auto cfg = load_config(config_path);
      const auto stack = read_stack(image_path);
      auto mask = read_mask(refine_mask_path);
      const auto prob = read_probability(prob_path, cfg.threshold);
      if (mask.shape() != stack.shape() || prob.shape() != stack.shape())
        throw InvalidInput("image, probability and mask dims differ");
      require_slice(slice, stack.shape());
      const auto result = refine_slice(normalized_slice(stack, slice), prob.slice(slice), mask.slice(slice),
                                       read_scribbles(scribbles_path, slice), cfg);
      mask.set_slice(slice, result.mask);
      write_mask(mask, stack.spacing, refine_out);
      std::cerr << "slice " << slice << ": geodesic " << result.geodesic_ms << " ms, evolve " << result.evolve_ms
                << " ms\n";
    } else if (*eval) {
      const RawArray pred_raw = read_raw(pred_path);
      const auto pred = decode_mask(pred_raw);
      const auto gt = read_mask(gt_path);
      if (pred.shape() != gt.shape()) throw InvalidInput("pred and gt dims differ");
      std::optional<Volume<double>> var;
      if (!eval_var_path.empty()) {
        var = read_uncertainty(eval_var_path);
        if (var->shape() != pred.shape()) throw InvalidInput("variance dims differ");
        if (!ueo_threshold) throw InvalidInput("--var needs --ueo-threshold");
      }
      const Spacing sp = decode_spacing(pred_raw.header);
      json slices = json::array();
      std::vector<double> dices, assds, ueos, rves;
      for (int k = 0; k < pred.slices(); ++k) {
        const MaskImage p = pred.slice(k), g = gt.slice(k);
        metrics::MetricReport r;
        r.dice = metrics::dice(p, g);
        dices.push_back(r.dice);
        const bool p_any = std::any_of(p.values().begin(), p.values().end(), [](auto v) { return v != 0; });
        const bool g_any = std::any_of(g.values().begin(), g.values().end(), [](auto v) { return v != 0; });
        if (p_any && g_any) assds.push_back(*(r.assd = metrics::assd(p, g, sp.row_mm, sp.col_mm)));
        if (var) {
          const ImageD u = var->slice(k);
          r.ueo_threshold = *ueo_threshold;
          ueos.push_back(*(r.ueo = metrics::ueo(u, p, g, *ueo_threshold)));
          if (p != g) rves.push_back(*(r.rve = metrics::rve(u, p, g, *ueo_threshold)));
        }
        json j = r;
        j["slice"] = k;
        slices.push_back(std::move(j));
      }
      auto agg = [](const std::vector<double>& v) {
        const auto ms = metrics::mean_std(v);
        return json{{"mean", ms.mean}, {"std", ms.std}, {"count", ms.count}};
      };
      json aggregate{{"dice", agg(dices)}, {"assd", agg(assds)}};
      if (var) {
        aggregate["ueo"] = agg(ueos);
        aggregate["rve"] = agg(rves);
      }
      if (eval_json) {
        std::cout << json{{"slices", slices}, {"aggregate", aggregate}}.dump(2) << "\n";
      } else {
        for (const auto& [name, a] : aggregate.items())
          std::printf("%-5s %.4f +- %.4f (n=%d)\n", name.c_str(), a["mean"].get<double>(), a["std"].get<double>(),
                      a["count"].get<int>());
      }
    } else if (*session) {
      const auto cfg = load_config(config_path);
      if (session_gt.empty()) throw InvalidInput("--mode simulated needs --gt");
      const auto stack = read_stack(image_path);
      const auto probs = read_probability_group(session_probs);
      const auto gt = read_mask(session_gt);
      SimulatedUser user(gt);
      SessionOptions opts;
      opts.schedule = schedule_from_string(schedule);
      opts.early_stop = !no_early_stop;
      opts.max_rounds = max_rounds;
      const auto result = run_session(stack, probs, &gt, user, cfg, opts);
      write_mask(result.final_mask, stack.spacing, session_out);
      if (!log_path.empty()) write_json(log_path, result.log);
      std::cerr << "fetched " << result.log.fetched_slices().size() << " of " << stack.num_slices()
                << " slices, edited " << result.log.edited_slices().size() << ", dice "
                << metrics::dice(result.initial.values(), gt.values()) << " -> "
                << metrics::dice(result.final_mask.values(), gt.values()) << "\n";
    } else if (*synth) {
      SynthSpec spec;
      if (!spec_path.empty()) read_json(spec_path).get_to(spec);
      const auto c = generate_synthetic_stack(spec, seed);
      const fs::path dir(out_dir);
      fs::create_directories(dir);
      write_stack(c.stack, dir / "stack");
      write_mask(c.gt, c.stack.spacing, dir / "gt");
      write_probability_group(c.probs, c.stack.spacing, dir / "probs");
      write_json((dir / "synth.json").string(), {{"spec", spec}, {"seed", seed}, {"hard_slices", c.hard_slices}});
    } else if (*serve) {
      service::StoreOptions opts;
      if (!data_dir.empty()) opts.data_dir = data_dir;
      opts.idle_timeout = std::chrono::seconds(idle_timeout);
      service::SessionStore store(opts);
      if (opts.data_dir) std::cerr << "resumed " << store.resume_from_disk() << " sessions\n";
      service::HttpServer server(store);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << host << ":" << port << "\n";
      if (!server.listen(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
      g_server = nullptr;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
