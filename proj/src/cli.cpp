// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sceneedit/cli.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <optional>
#include <sstream>

#include "sceneedit/dataset_io.hpp"
#include "sceneedit/metrics.hpp"
#include "sceneedit/service.hpp"

namespace sceneedit {

namespace fs = std::filesystem;

namespace {

struct GenOptions {
  std::string assets;
  std::string out;
  int num_seqs = 1;
  std::optional<int> seq_len;
  std::uint64_t seed = 0;
  int width = 512;
  int height = 512;
  std::string config;
  int threads = 0;
};

std::string format_score(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(6);
  s << v;
  return s.str();
}

int generate(Domain domain, const GenOptions& o, std::ostream& out, std::ostream& err) {
  if (o.num_seqs < 0) {
    err << "error: --num-seqs must be non-negative\n";
    return 2;
  }
  const AssetStore assets = AssetStore::load(o.assets);
  SamplerConfig cfg = o.config.empty() ? SamplerConfig{} : load_sampler_config(o.config);
  if (o.seq_len) cfg.seq_len = *o.seq_len;
  cfg.seed = o.seed;
  cfg.validate();

  ExportContext ctx;
  ctx.asset_dir = fs::absolute(o.assets).lexically_normal().string();
  ctx.config = cfg;
  ctx.assets = &assets;
  fs::create_directories(o.out);

  if (o.threads > 0) omp_set_num_threads(o.threads);
  const int n = o.num_seqs;
  std::vector<SequenceSummary> summaries(static_cast<std::size_t>(n));
  std::vector<std::string> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      const Sequence seq =
          generate_sequence(domain, assets, o.width, o.height, cfg, o.seed + static_cast<std::uint64_t>(i));
      write_sequence_dir(seq, o.out, ctx);
      summaries[static_cast<std::size_t>(i)] = summarize(seq);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!errors[static_cast<std::size_t>(i)].empty()) {
      err << "error: sequence " << i << ": " << errors[static_cast<std::size_t>(i)] << "\n";
      return 1;
    }
  }
  update_dataset_manifest(o.out, summaries, ctx);
  const auto truncated = std::count_if(summaries.begin(), summaries.end(), [](const auto& s) { return s.truncated; });
  std::size_t frames = 0;
  for (const auto& s : summaries) frames += s.seq_len + 1;
  out << "generated " << n << " " << to_string(domain) << " sequences, " << frames << " frames, " << truncated
      << " truncated, config_hash=" << config_hash(cfg) << ", out=" << o.out << "\n";
  return 0;
}

void add_gen_options(CLI::App* cmd, GenOptions& o) {
  cmd->add_option("--assets", o.assets, "Asset directory (assets.json + PNGs)")->required();
  cmd->add_option("--out", o.out, "Output dataset directory")->required();
  cmd->add_option("--num-seqs", o.num_seqs, "Number of sequences")->capture_default_str();
  cmd->add_option("--seq-len", o.seq_len, "Operations per sequence (default 32)");
  cmd->add_option("--seed", o.seed, "Base seed; sequence i uses seed + i")->capture_default_str();
  cmd->add_option("--width", o.width, "Canvas width")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--height", o.height, "Canvas height")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--config", o.config, "Sampler config JSON");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = OpenMP default)")->capture_default_str();
}

SessionService* g_service = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scene editing dataset generator and session service", "sceneedit"};
  app.require_subcommand(1);

  GenOptions real_opts;
  auto* gen_real = app.add_subcommand("gen-real", "Generate realistic-domain compositing sequences");
  add_gen_options(gen_real, real_opts);

  GenOptions syn_opts;
  auto* plan_syn = app.add_subcommand("plan-syn", "Plan synthetic 3-D sequences with scene scripts and proxy renders");
  add_gen_options(plan_syn, syn_opts);

  ServiceConfig service;
  std::string service_assets;
  int ttl_seconds = 1800;
  std::string export_dir = "exports";
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--assets", service_assets, "Asset directory")->required();
  serve->add_option("--host", service.host, "Bind address")->capture_default_str();
  serve->add_option("--port", service.port, "Port (0 picks a free one)")->capture_default_str()->check(CLI::Range(0, 65535));
  serve->add_option("--width", service.width, "Canvas width")->capture_default_str();
  serve->add_option("--height", service.height, "Canvas height")->capture_default_str();
  serve->add_option("--N", service.max_history, "Max history pairs per generator call")->capture_default_str();
  serve->add_option("--generator", service.generator, "oracle | network-stub")
      ->capture_default_str()
      ->check(CLI::IsMember({"oracle", "network-stub"}));
  serve->add_option("--seed", service.seed, "Service seed")->capture_default_str();
  serve->add_option("--ttl", ttl_seconds, "Idle session TTL in seconds")->capture_default_str();
  serve->add_option("--export-dir", export_dir, "Directory for session exports")->capture_default_str();

  std::string validate_dir;
  std::string validate_assets;
  auto* validate = app.add_subcommand("validate", "Replay and check an exported dataset");
  validate->add_option("dir", validate_dir, "Dataset directory")->required();
  validate->add_option("--assets", validate_assets, "Override the asset directory recorded in the dataset");

  std::vector<std::string> metric_images;
  std::string series_dir;
  auto* metrics = app.add_subcommand("metrics", "PSNR/SSIM of two images, or adjacent-pair means of a series");
  metrics->add_option("images", metric_images, "Two images, or more for a series");
  metrics->add_option("--series", series_dir, "Directory of frames (sorted by name) to score pairwise");

  std::string assets_out;
  std::uint64_t assets_seed = 0;
  int background_size = 512;
  auto* make_assets = app.add_subcommand("make-assets", "Write the procedural demo asset set");
  make_assets->add_option("--out", assets_out, "Asset directory to create")->required();
  make_assets->add_option("--seed", assets_seed, "Seed")->capture_default_str();
  make_assets->add_option("--background-size", background_size, "Background edge length")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen_real) return generate(Domain::Real, real_opts, out, err);
    if (*plan_syn) return generate(Domain::Syn, syn_opts, out, err);
    if (*serve) {
      service.asset_dir = service_assets;
      service.idle_ttl = std::chrono::seconds(ttl_seconds);
      service.export_dir = export_dir;
      SessionService svc(service, AssetStore::load(service_assets));
      const int port = svc.bind();
      out << "listening on http://" << service.host << ":" << port << "/api/v1" << std::endl;
      g_service = &svc;
      std::signal(SIGINT, handle_stop_signal);
      std::signal(SIGTERM, handle_stop_signal);
      svc.run();
      g_service = nullptr;
      return 0;
    }
    if (*validate) {
      std::optional<AssetStore> assets;
      if (!validate_assets.empty()) assets = AssetStore::load(validate_assets);
      const ValidationReport report = validate_dataset(validate_dir, assets ? &*assets : nullptr);
      out << to_json(report).dump(2) << "\n";
      return report.ok() ? 0 : 1;
    }
    if (*metrics) {
      std::vector<std::string> files = metric_images;
      if (!series_dir.empty()) {
        for (const auto& entry : fs::directory_iterator(series_dir)) {
          if (entry.path().extension() == ".png") files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
      }
      if (files.size() < 2) {
        err << "error: metrics needs at least two images\n";
        return 2;
      }
      std::vector<Raster> frames;
      for (const auto& f : files) frames.push_back(read_png(f));
      const PairScores scores = adjacent_pair_scores(frames);
      out << "PSNR=" << format_score(scores.psnr) << " SSIM=" << format_score(scores.ssim) << " pairs=" << scores.pairs
          << "\n";
      return 0;
    }
    if (*make_assets) {
      make_demo_assets(assets_out, assets_seed, background_size);
      out << "wrote demo assets to " << assets_out << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.code_name() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace sceneedit
