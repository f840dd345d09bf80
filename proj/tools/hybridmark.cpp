// hybridmark: command-line front end for the watermarking library.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridmark.hpp"

namespace hm = hybridmark;
namespace fs = std::filesystem;

namespace {

struct Keys {
  std::string key1;
  std::string key2 = "24";
};

hm::EmbedConfig make_config(const Keys& keys, double strength) {
  hm::EmbedConfig cfg;
  cfg.pn_key.seed = hm::parse_key(keys.key1);
  cfg.arnold_key.iterations = hm::parse_key(keys.key2);
  cfg.strength = strength;
  return cfg;
}

std::vector<double> parse_k_list(const std::string& text) {
  std::vector<double> ks;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const double k = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad strength '" + item + "' in --k-list");
    ks.push_back(k);
  }
  if (ks.empty()) throw std::invalid_argument("--k-list is empty");
  return ks;
}

void print_line(const char* a, double x, const char* b, double y) {
  std::printf("%s=%.4f %s=%.4f\n", a, x, b, y);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind DFT/DCT image watermarking"};
  app.require_subcommand(1);

  Keys keys;
  std::string in, out, wm_path, spec, config, k_list, a_path, b_path, out_dir;
  double strength = hm::kDefaultStrength;
  std::size_t rows = 0, cols = 0, count = 5, parallelism = 0;
  std::string seed = "0";
  bool bits = false;

  auto* embed = app.add_subcommand("embed", "Embed a PBM logo into a PGM image");
  embed->add_option("--in", in, "Host PGM")->required()->check(CLI::ExistingFile);
  embed->add_option("--wm", wm_path, "Logo PBM")->required()->check(CLI::ExistingFile);
  embed->add_option("--out", out, "Watermarked PGM")->required();
  embed->add_option("--key1", keys.key1, "PN seed (64-bit)")->required();
  embed->add_option("--key2", keys.key2, "Arnold iterations")->capture_default_str();
  embed->add_option("--k", strength, "Embedding strength")->capture_default_str();

  auto* extract = app.add_subcommand("extract", "Recover the logo from a watermarked PGM");
  extract->add_option("--in", in, "Watermarked PGM")->required()->check(CLI::ExistingFile);
  extract->add_option("--key1", keys.key1, "PN seed (64-bit)")->required();
  extract->add_option("--key2", keys.key2, "Arnold iterations")->capture_default_str();
  extract->add_option("--rows", rows, "Logo rows")->required()->check(CLI::PositiveNumber);
  extract->add_option("--cols", cols, "Logo columns")->required()->check(CLI::PositiveNumber);
  extract->add_option("--out", out, "Extracted PBM")->required();

  auto* attack = app.add_subcommand("attack", "Apply an attack token to a PGM");
  attack->add_option("--in", in, "Input PGM")->required()->check(CLI::ExistingFile);
  attack->add_option("--spec", spec, "Attack token, e.g. jpeg:qf=90")->required();
  attack->add_option("--out", out, "Attacked PGM")->required();

  auto* metrics = app.add_subcommand("metrics", "Compare two images (psnr/ssim) or two logos (nc/ber)");
  metrics->add_flag("--bits", bits, "Inputs are PBM logos");
  metrics->add_option("--a,a", a_path, "First file")->required()->check(CLI::ExistingFile);
  metrics->add_option("--b,b", b_path, "Second file")->required()->check(CLI::ExistingFile);

  auto* bench = app.add_subcommand("bench", "Run the attack grid over a corpus");
  bench->add_option("--config", config, "Bench config file")->required()->check(CLI::ExistingFile);
  bench->add_option("--parallelism", parallelism, "Override worker count")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Strength sweep on the first corpus image");
  sweep->add_option("--config", config, "Bench config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--k-list", k_list, "Comma-separated strengths")->required();
  sweep->add_option("--parallelism", parallelism, "Override worker count")->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen-corpus", "Write the synthetic corpus, a logo and bench.cfg");
  gen->add_option("--out-dir", out_dir, "Output directory")->required();
  gen->add_option("--seed", seed, "Corpus seed")->capture_default_str();
  gen->add_option("--count", count, "Number of images")->capture_default_str()->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*embed) {
      const auto host = hm::read_pgm(in);
      const auto wm = hm::read_watermark_pbm(wm_path);
      const auto result = hm::embed(host, wm, make_config(keys, strength));
      hm::write_pgm(result.watermarked, out);
      print_line("psnr", result.psnr, "ssim", result.ssim);
    } else if (*extract) {
      auto cfg = make_config(keys, strength);
      cfg.watermark_rows = rows;
      cfg.watermark_cols = cols;
      hm::write_watermark_pbm(hm::extract(hm::read_pgm(in), cfg), out);
    } else if (*attack) {
      const auto parsed = hm::parse_attack(spec);
      hm::write_pgm(hm::apply_attack(hm::read_pgm(in), parsed), out);
    } else if (*metrics) {
      if (bits) {
        const auto s = hm::robustness(hm::read_watermark_pbm(a_path), hm::read_watermark_pbm(b_path));
        print_line("nc", s.nc, "ber", s.ber);
      } else {
        const auto q = hm::quality(hm::read_pgm(a_path), hm::read_pgm(b_path));
        print_line("psnr", q.psnr, "ssim", q.ssim);
      }
    } else if (*bench || *sweep) {
      auto cfg = hm::load_bench_config(config);
      if (parallelism > 0) cfg.parallelism = parallelism;
      const auto report = *bench ? hm::run_bench(cfg) : hm::sweep_strength(cfg, parse_k_list(k_list));
      hm::emit_tables(report, cfg.output_dir);
      std::printf("rows=%zu out=%s\n", report.rows.size(), cfg.output_dir.string().c_str());
    } else if (*gen) {
      const auto paths = hm::write_synthetic_corpus(out_dir, hm::parse_key(seed), count);
      std::printf("images=%zu config=%s\n", paths.size(), (fs::path(out_dir) / "bench.cfg").string().c_str());
    }
  } catch (const hm::AttackParseError& e) {
    std::cerr << "error: bad attack token '" << spec << "': " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
