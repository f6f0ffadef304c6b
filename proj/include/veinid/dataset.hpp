#pragma once

// Synthetic dataset on disk: `id<i>_s<j>.ppm` rasters with `.gt` sidecars,
// and the scan that groups such files back into identities.

#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "veinid/error.hpp"
#include "veinid/pnm.hpp"
#include "veinid/synth.hpp"
#include "veinid/template_io.hpp"

namespace veinid {

inline std::string sample_name(int identity, int sample) {
  return "id" + std::to_string(identity) + "_s" + std::to_string(sample);
}

// Writes identities x samples images; sample 0 of each identity is clean.
// Returns the written PPM paths in identity-major order.
inline std::vector<std::string> write_dataset(const std::string& outdir, std::uint64_t seed,
                                              int identities, int samples,
                                              const DatasetProtocol& proto = {}) {
  if (identities < 1) throw InvalidParameter("synth: identities must be >= 1");
  if (samples < 1) throw InvalidParameter("synth: samples must be >= 1");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec || !fs::is_directory(outdir)) throw InvalidParameter("synth: cannot create '" + outdir + "'");
  std::vector<std::string> written;
  for (int i = 0; i < identities; ++i) {
    for (int j = 0; j < samples; ++j) {
      const auto s = dataset_sample(seed, i, j, proto);
      const auto base = (fs::path(outdir) / sample_name(i, j)).string();
      pnm::write_ppm(base + ".ppm", s.image);
      detail::write_text_file(base + ".gt", format_ground_truth(s.truth));
      written.push_back(base + ".ppm");
    }
  }
  return written;
}

struct DatasetEntry {
  int identity = 0;
  int sample = 0;
  std::string path;
};

// PPM files named id<i>_s<j>.ppm, grouped by identity and ordered by index.
inline std::vector<std::vector<DatasetEntry>> scan_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw FormatError("eval: '" + dir + "' is not a readable directory");
  static const std::regex name_re(R"(id(\d+)_s(\d+)\.ppm)");
  std::map<int, std::map<int, std::string>> found;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    const auto name = it->path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, name_re)) continue;
    found[std::stoi(m[1].str())][std::stoi(m[2].str())] = it->path().string();
  }
  if (ec) throw FormatError("eval: cannot list '" + dir + "'");
  std::vector<std::vector<DatasetEntry>> out;
  for (const auto& [id, samples] : found) {
    auto& group = out.emplace_back();
    for (const auto& [j, path] : samples) group.push_back({id, j, path});
  }
  return out;
}

}  // namespace veinid
