// Copyright 2026 The SceneEdit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "sceneedit/cli.hpp"
#include "support.hpp"

using namespace sceneedit;
using namespace sceneedit::testing;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "sceneedit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::size_t count_files(const fs::path& dir) {
  std::size_t n = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) n += e.is_regular_file();
  return n;
}

}  // namespace

TEST_CASE("gen-real writes sequences that validate") {
  const fs::path out = scratch_dir("cli_gen");
  const std::string assets = demo_asset_dir().string();
  const Result r = run({"gen-real", "--assets", assets, "--out", out.string(), "--num-seqs", "2", "--seq-len", "4",
                        "--width", "64", "--height", "64", "--seed", "10"});
  CHECK(r.status == 0);
  CHECK(r.out.find("generated 2 real sequences, 10 frames") != std::string::npos);
  for (const char* id : {"real_000010", "real_000011"}) {
    CHECK(fs::exists(out / id / "annotations.json"));
    CHECK(fs::exists(out / id / "frames" / "004.png"));
    CHECK_FALSE(fs::exists(out / id / "frames" / "005.png"));
  }
  const Result v = run({"validate", out.string()});
  CHECK(v.status == 0);
  CHECK(v.out.find("\"ok\": true") != std::string::npos);

  // Same arguments, same bytes.
  const fs::path again = scratch_dir("cli_gen_again");
  run({"gen-real", "--assets", assets, "--out", again.string(), "--num-seqs", "2", "--seq-len", "4", "--width", "64",
       "--height", "64", "--seed", "10"});
  CHECK(count_files(out) == count_files(again));
  CHECK(read_file_bytes(out / "real_000011" / "annotations.json") ==
        read_file_bytes(again / "real_000011" / "annotations.json"));

  const Result m = run({"metrics", "--series", (out / "real_000010" / "frames").string()});
  CHECK(m.status == 0);
  CHECK(m.out.find("pairs=4") != std::string::npos);
  const Result same = run({"metrics", (out / "real_000010" / "frames" / "000.png").string(),
                           (out / "real_000010" / "frames" / "000.png").string()});
  CHECK(same.out == "PSNR=inf SSIM=1.000000 pairs=1\n");
}

TEST_CASE("plan-syn writes scripts") {
  const fs::path out = scratch_dir("cli_syn");
  const Result r = run({"plan-syn", "--assets", demo_asset_dir().string(), "--out", out.string(), "--num-seqs", "1",
                        "--seq-len", "3", "--width", "64", "--height", "48"});
  CHECK(r.status == 0);
  CHECK(fs::exists(out / "syn_000000" / "script.json"));
  CHECK(run({"validate", out.string()}).status == 0);
}

TEST_CASE("argument errors") {
  const Result missing = run({"gen-real", "--assets", "/nonexistent/assets", "--out", scratch_dir("cli_err").string()});
  CHECK(missing.status != 0);
  CHECK_FALSE(missing.err.empty());
  CHECK(run({"gen-real"}).status != 0);
  CHECK(run({"frobnicate"}).status != 0);
  CHECK(run({"metrics", "only_one.png"}).status != 0);
  const fs::path broken = scratch_dir("cli_broken");
  write_text_file(broken / "manifest.json", "[]");
  CHECK(run({"validate", broken.string()}).status != 0);
}

TEST_CASE("help lists every subcommand and flag") {
  const Result help = run({"--help"});
  CHECK(help.status == 0);
  for (const char* sub : {"gen-real", "plan-syn", "serve", "validate", "metrics", "make-assets"}) {
    CHECK(help.out.find(sub) != std::string::npos);
  }
  const Result gen = run({"gen-real", "--help"});
  for (const char* flag : {"--assets", "--out", "--num-seqs", "--seq-len", "--seed", "--width", "--height", "--config"}) {
    CHECK(gen.out.find(flag) != std::string::npos);
  }
  const Result serve = run({"serve", "--help"});
  for (const char* flag : {"--port", "--N", "--generator", "--ttl"}) CHECK(serve.out.find(flag) != std::string::npos);
}

TEST_CASE("installed binary runs") {
  const fs::path out = scratch_dir("cli_binary");
  const std::string cmd = std::string(SCENEEDIT_CLI_PATH) + " make-assets --out " + (out / "assets").string() +
                          " --background-size 32 > /dev/null && " + SCENEEDIT_CLI_PATH + " gen-real --assets " +
                          (out / "assets").string() + " --out " + (out / "data").string() +
                          " --num-seqs 1 --seq-len 2 --width 32 --height 32 > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(out / "data" / "manifest.json"));
}
