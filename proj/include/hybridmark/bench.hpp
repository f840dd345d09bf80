#pragma once

// Embed -> attack grid -> extract -> metrics over a corpus, plus report
// writers and a small synthetic corpus for self-contained runs.
//
// Config file, one `key = value` per line, '#' starts a comment:
//   image = camera.pgm        (repeatable; relative to the config file)
//   watermark = logo.pbm
//   key1 = 7                  PN seed
//   key2 = 24                 Arnold iterations
//   k = 9600
//   domain = dft-dct | dft
//   attack = jpeg:qf=90       (repeatable)
//   output = out
//   parallelism = 4

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hybridmark/attacks.hpp"
#include "hybridmark/codec.hpp"
#include "hybridmark/image.hpp"
#include "hybridmark/metrics.hpp"
#include "hybridmark/netpbm.hpp"
#include "hybridmark/pn.hpp"

namespace hybridmark {

class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& what, std::size_t line)
      : std::runtime_error("config line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

struct BenchConfig {
  std::vector<std::filesystem::path> image_paths;
  std::filesystem::path watermark_path;
  EmbedConfig embed;
  std::vector<AttackSpec> attack_grid;
  std::filesystem::path output_dir = "bench-out";
  std::size_t parallelism = 1;
};

struct EvalRow {
  std::string image_id;
  std::string attack_token;
  double nc = 0.0;
  double ber = 0.0;
  double psnr_after_attack = 0.0;
  double ssim_after_attack = 0.0;
  double embed_psnr = 0.0;
  double embed_ssim = 0.0;
  double wall_time_ms = 0.0;
  std::string family;  // report.md grouping; not a CSV column
};

struct EvalReport {
  std::vector<EvalRow> rows;
};

/// The ten-attack grid used by the acceptance runs.
inline std::vector<AttackSpec> standard_attack_grid() {
  std::vector<AttackSpec> grid;
  for (const char* token : {"jpeg:qf=90", "jpeg:qf=50", "gn:var=0.001,seed=7", "sp:density=0.001,seed=7",
                            "lpf:sigma=0.5,win=9", "he", "crop:frac=0.25", "crop:frac=0.5", "rot:deg=0.25",
                            "chain:[he|gn:var=0.001,seed=7]"}) {
    grid.push_back(parse_attack(token));
  }
  return grid;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace detail

/// `base_dir` anchors relative paths (normally the config file's directory).
inline BenchConfig parse_bench_config(std::string_view text, const std::filesystem::path& base_dir = {}) {
  BenchConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", lineno);
    try {
      if (key == "image") {
        cfg.image_paths.push_back(resolve(value));
      } else if (key == "watermark") {
        cfg.watermark_path = resolve(value);
      } else if (key == "key1") {
        cfg.embed.pn_key.seed = parse_key(value);
      } else if (key == "key2") {
        cfg.embed.arnold_key.iterations = parse_key(value);
      } else if (key == "k") {
        std::size_t used = 0;
        cfg.embed.strength = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
      } else if (key == "domain") {
        if (value == "dft-dct") cfg.embed.domain = EmbedDomain::kDftDct;
        else if (value == "dft") cfg.embed.domain = EmbedDomain::kDftOnly;
        else throw std::invalid_argument("domain must be dft-dct or dft");
      } else if (key == "attack") {
        cfg.attack_grid.push_back(parse_attack(value));
      } else if (key == "output") {
        cfg.output_dir = resolve(value);
      } else if (key == "parallelism") {
        cfg.parallelism = static_cast<std::size_t>(parse_key(value));
        if (cfg.parallelism == 0) throw std::invalid_argument("parallelism must be >= 1");
      } else {
        throw ConfigError("unknown key '" + key + "'", lineno);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("bad value for '" + key + "': " + e.what(), lineno);
    }
  }
  if (cfg.image_paths.empty()) throw ConfigError("no image listed", lineno);
  if (cfg.watermark_path.empty()) throw ConfigError("no watermark given", lineno);
  return cfg;
}

inline BenchConfig load_bench_config(const std::filesystem::path& path) {
  return parse_bench_config(detail::slurp(path), path.parent_path());
}

/// Runs body(0..count-1) on up to `workers` threads. The exception from the
/// lowest failing index is rethrown after all threads join.
template <typename Body>
void parallel_for(std::size_t count, std::size_t workers, Body&& body) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

/// Grid with a leading `none` when the caller did not list one.
inline std::vector<AttackSpec> with_baseline(std::vector<AttackSpec> grid) {
  const AttackSpec none{attack::None{}};
  if (std::find(grid.begin(), grid.end(), none) == grid.end()) grid.insert(grid.begin(), none);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (grid[i] == grid[j]) throw ContractViolation("attack listed twice: " + attack_token(grid[i]));
    }
  }
  return grid;
}

struct EmbeddedImage {
  std::string id;
  std::string error;
  EmbedResult result;
  double embed_ms = 0.0;
};

inline EvalRow error_row(const std::string& id, const std::string& message) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {id, "error: " + message, nan, nan, nan, nan, nan, nan, 0.0, "error"};
}

/// Rows for every attack in `grid` against an already embedded image.
inline std::vector<EvalRow> evaluate(const std::vector<EmbeddedImage>& images, const WatermarkBits& wm,
                                     const std::vector<EmbedConfig>& configs, const std::vector<AttackSpec>& grid,
                                     std::size_t parallelism) {
  const std::size_t per_image = grid.size();
  std::vector<EvalRow> rows(images.size() * per_image);
  parallel_for(rows.size(), parallelism, [&](std::size_t t) {
    const auto& img = images[t / per_image];
    const auto& spec = grid[t % per_image];
    EvalRow& row = rows[t];
    if (!img.error.empty()) return;
    const GrayImage attacked = apply_attack(img.result.watermarked, spec);
    const auto start = Clock::now();
    const WatermarkBits got = extract(attacked, configs[t / per_image]);
    const double extract_ms = elapsed_ms(start);
    const auto score = robustness(wm, got);
    const auto q = quality(img.result.watermarked, attacked);
    row = {img.id,       attack_token(spec),     score.nc,
           score.ber,    q.psnr,                 q.ssim,
           img.result.psnr, img.result.ssim,     img.embed_ms + extract_ms,
           attack_family(spec)};
  });
  // Failed images collapse to a single error row.
  std::vector<EvalRow> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i].error.empty()) {
      out.push_back(error_row(images[i].id, images[i].error));
      continue;
    }
    for (std::size_t a = 0; a < per_image; ++a) out.push_back(std::move(rows[i * per_image + a]));
  }
  return out;
}

inline EmbeddedImage embed_one(const std::filesystem::path& path, const std::string& id, const WatermarkBits& wm,
                               const EmbedConfig& cfg) {
  EmbeddedImage e;
  e.id = id;
  GrayImage host;
  try {
    host = read_pgm(path);
  } catch (const FormatError& err) {
    e.error = err.what();
    return e;
  } catch (const IoError& err) {
    e.error = err.what();
    return e;
  } catch (const ContractViolation& err) {
    e.error = err.what();
    return e;
  }
  const auto start = Clock::now();
  e.result = embed(host, wm, cfg);  // CapacityError propagates: fatal
  e.embed_ms = elapsed_ms(start);
  return e;
}

inline EmbedConfig sized(EmbedConfig cfg, const WatermarkBits& wm) {
  cfg.watermark_rows = wm.rows();
  cfg.watermark_cols = wm.cols();
  return cfg;
}

}  // namespace detail

/// One row per (image, attack), images in config order, attacks in grid
/// order with `none` first if it was not listed. Unreadable images yield a
/// single error row; capacity errors abort the run.
inline EvalReport run_bench(const BenchConfig& cfg) {
  if (cfg.image_paths.empty()) throw ContractViolation("bench needs at least one image");
  const WatermarkBits wm = read_watermark_pbm(cfg.watermark_path);
  const auto grid = detail::with_baseline(cfg.attack_grid);
  const EmbedConfig embed_cfg = detail::sized(cfg.embed, wm);

  std::vector<detail::EmbeddedImage> images(cfg.image_paths.size());
  parallel_for(images.size(), cfg.parallelism, [&](std::size_t i) {
    images[i] = detail::embed_one(cfg.image_paths[i], cfg.image_paths[i].filename().string(), wm, embed_cfg);
  });
  const std::vector<EmbedConfig> configs(images.size(), embed_cfg);
  return {detail::evaluate(images, wm, configs, grid, cfg.parallelism)};
}

/// Cross product of strengths and the attack grid on the first image. Image
/// ids carry the strength, e.g. "camera.pgm@k=9600".
inline EvalReport sweep_strength(const BenchConfig& cfg, const std::vector<double>& strengths) {
  if (strengths.empty()) throw ContractViolation("sweep needs at least one strength");
  for (double k : strengths) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ContractViolation("sweep strengths must be positive");
  }
  if (cfg.image_paths.empty()) throw ContractViolation("sweep needs an image");
  const WatermarkBits wm = read_watermark_pbm(cfg.watermark_path);
  const auto grid = detail::with_baseline(cfg.attack_grid);
  const auto& path = cfg.image_paths.front();

  std::vector<detail::EmbeddedImage> images(strengths.size());
  std::vector<EmbedConfig> configs(strengths.size());
  for (std::size_t i = 0; i < strengths.size(); ++i) {
    configs[i] = detail::sized(cfg.embed, wm);
    configs[i].strength = strengths[i];
  }
  parallel_for(images.size(), cfg.parallelism, [&](std::size_t i) {
    images[i] = detail::embed_one(path, path.filename().string() + "@k=" + detail::format_number(strengths[i]), wm,
                                  configs[i]);
  });
  return {detail::evaluate(images, wm, configs, grid, cfg.parallelism)};
}

// ---------------------------------------------------------------------------
// Report writers

namespace detail {

inline std::string fixed4(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

inline constexpr const char* kReportHeader =
    "imageId,attackToken,nc,ber,psnrAfterAttack,ssimAfterAttack,embedPsnr,embedSsim,wallTimeMs";

/// RFC 4180: CRLF line ends, fields quoted when they hold ',', '"' or line breaks.
inline std::string format_csv(const EvalReport& report) {
  using detail::csv_field;
  using detail::fixed4;
  std::string out = std::string(kReportHeader) + "\r\n";
  for (const auto& r : report.rows) {
    out += csv_field(r.image_id) + ',' + csv_field(r.attack_token) + ',' + fixed4(r.nc) + ',' + fixed4(r.ber) + ',' +
           fixed4(r.psnr_after_attack) + ',' + fixed4(r.ssim_after_attack) + ',' + fixed4(r.embed_psnr) + ',' +
           fixed4(r.embed_ssim) + ',' + fixed4(r.wall_time_ms) + "\r\n";
  }
  return out;
}

/// One table per attack family, families in first-seen order. Timing is left
/// out so the file is reproducible.
inline std::string format_markdown(const EvalReport& report) {
  using detail::fixed4;
  std::vector<std::string> families;
  for (const auto& r : report.rows) {
    if (std::find(families.begin(), families.end(), r.family) == families.end()) families.push_back(r.family);
  }
  std::string out = "# Watermark benchmark\n";
  for (const auto& fam : families) {
    out += "\n## " + fam + "\n\n";
    out += "| image | attack | NC | BER | PSNR after attack | SSIM after attack | embed PSNR | embed SSIM |\n";
    out += "|---|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& r : report.rows) {
      if (r.family != fam) continue;
      out += "| " + detail::md_cell(r.image_id) + " | " + detail::md_cell(r.attack_token) + " | " + fixed4(r.nc) +
             " | " + fixed4(r.ber) + " | " + fixed4(r.psnr_after_attack) + " | " + fixed4(r.ssim_after_attack) +
             " | " + fixed4(r.embed_psnr) + " | " + fixed4(r.embed_ssim) + " |\n";
    }
  }
  return out;
}

inline void emit_tables(const EvalReport& report, const std::filesystem::path& dir) {
  if (report.rows.empty()) throw ContractViolation("report is empty");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  detail::spit(dir / "report.csv", format_csv(report));
  detail::spit(dir / "report.md", format_markdown(report));
}

// ---------------------------------------------------------------------------
// Synthetic corpus

/// 512x512 test image: checkerboard + band-limited noise + linear gradient.
/// Cell size and gradient direction vary with `index`.
inline GrayImage synthetic_image(std::uint64_t seed, std::size_t index, std::size_t side = 512) {
  constexpr std::array<std::size_t, 5> kCells = {32, 16, 48, 24, 64};
  const std::size_t cell = kCells[index % kCells.size()];
  const double angle = static_cast<double>(index) * 0.7;
  Xorshift64Star rng(seed * 0x100000001B3ull + index);

  RealMatrix noise(side, side);
  for (auto& v : noise.values()) v = rng.normal();
  // Band-limit with a separable Gaussian (sigma 3, radius 9, wrap-around).
  std::array<double, 19> k{};
  double ksum = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double d = static_cast<double>(i) - 9.0;
    k[i] = std::exp(-d * d / 18.0);
    ksum += k[i];
  }
  for (auto& v : k) v /= ksum;
  RealMatrix tmp(side, side);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i) acc += k[i] * noise(y, (x + side + i - 9) % side);
      tmp(y, x) = acc;
    }
  }
  double sq = 0.0;
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i) acc += k[i] * tmp((y + side + i - 9) % side, x);
      noise(y, x) = acc;
      sq += acc * acc;
    }
  }
  const double sd = std::sqrt(sq / static_cast<double>(side * side));

  GrayImage img(side, side);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double span = (std::abs(c) + std::abs(s)) * static_cast<double>(side - 1);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const double checker = ((x / cell + y / cell) % 2) ? 1.0 : -1.0;
      const double proj = c * static_cast<double>(x) + s * static_cast<double>(y);
      const double offset = (c < 0 ? -c : 0.0) * static_cast<double>(side - 1) + (s < 0 ? -s : 0.0) * static_cast<double>(side - 1);
      const double grad = (proj + offset) / span - 0.5;
      img(y, x) = 128.0 + 40.0 * checker + 25.0 * noise(y, x) / sd + 60.0 * grad;
    }
  }
  return round_clip(std::move(img));
}

/// Deterministic 19x52 block-letter logo used when no logo file is supplied.
inline WatermarkBits synthetic_logo(std::size_t rows = 19, std::size_t cols = 52) {
  WatermarkBits wm(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const bool border = r < 2 || c < 2 || r + 2 >= rows || c + 2 >= cols;
      const bool stripe = (r + c) % 7 < 2 && r > 3 && r + 4 < rows;
      if (border || stripe) wm.set(r, c, 1);
    }
  }
  return wm;
}

/// Writes synth_<i>.pgm, logo.pbm and bench.cfg (standard grid) into `dir`.
inline std::vector<std::filesystem::path> write_synthetic_corpus(const std::filesystem::path& dir, std::uint64_t seed,
                                                                 std::size_t count = 5) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> paths;
  std::string cfg = "# synthetic corpus, seed " + std::to_string(seed) + "\n";
  for (std::size_t i = 0; i < count; ++i) {
    const std::string name = "synth_" + std::to_string(i) + ".pgm";
    write_pgm(synthetic_image(seed, i), dir / name);
    paths.push_back(dir / name);
    cfg += "image = " + name + "\n";
  }
  write_watermark_pbm(synthetic_logo(), dir / "logo.pbm");
  cfg += "watermark = logo.pbm\nkey1 = 7\nkey2 = 24\nk = 9600\noutput = report\nparallelism = 4\n";
  for (const auto& a : standard_attack_grid()) cfg += "attack = " + attack_token(a) + "\n";
  detail::spit(dir / "bench.cfg", cfg);
  return paths;
}

}  // namespace hybridmark
