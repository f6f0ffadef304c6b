// veinid: hand-vein templates, matching, synthetic datasets and evaluation.
//
// Exit codes: 0 success or accept, 1 reject, 2 input or parameter error,
// 3 degenerate data (no features, empty ROI, too little data).

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "veinid/veinid.hpp"

namespace {

constexpr int kExitReject = 1;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

veinid::PipelineConfig config_from(const std::string& path) {
  return path.empty() ? veinid::PipelineConfig{} : veinid::load_config(path);
}

int cmd_pipeline(const std::string& input, const std::string& output, const std::string& config) {
  const auto cfg = config_from(config);
  const auto img = veinid::pnm::read_ppm(input);
  const auto tpl = veinid::extract_template(img, cfg, input);
  veinid::write_vtpl(output, tpl);
  return 0;
}

int cmd_match(const std::string& probe_path, const std::string& gallery_path,
              const veinid::MatchParams& params) {
  const auto probe = veinid::read_vtpl(probe_path);
  const auto gallery = veinid::read_vtpl(gallery_path);
  const auto result = veinid::match_templates(probe, gallery, params);
  const auto decision = veinid::verify(result, params);
  std::printf("V=%.4f decision=%s\n", result.score_v, veinid::to_string(decision));
  return decision == veinid::Decision::accept ? 0 : kExitReject;
}

int cmd_synth(std::uint64_t seed, int identities, int samples, const std::string& outdir) {
  const auto files = veinid::write_dataset(outdir, seed, identities, samples);
  std::printf("wrote %zu images to %s\n", files.size(), outdir.c_str());
  return 0;
}

int cmd_eval(const std::string& dataset, const std::string& config, const std::string& csv) {
  const auto cfg = config_from(config);
  const auto groups = veinid::scan_dataset(dataset);
  std::vector<std::vector<veinid::Template>> templates;
  int failed = 0;
  for (const auto& group : groups) {
    auto& row = templates.emplace_back();
    for (const auto& entry : group) {
      const auto img = veinid::pnm::read_ppm(entry.path);
      try {
        row.push_back(veinid::extract_template(img, cfg, entry.path));
      } catch (const veinid::DegenerateData& e) {
        // Scored as 0 against everything.
        std::fprintf(stderr, "warning: %s: %s\n", entry.path.c_str(), e.what());
        row.emplace_back();
        ++failed;
      }
    }
  }
  const auto scores = veinid::score_dataset(templates, cfg.match);
  const auto report = veinid::sweep(scores);
  veinid::detail::write_text_file(csv, veinid::format_csv(report));
  if (failed > 0) std::fprintf(stderr, "warning: %d samples produced no template\n", failed);
  std::printf("%s\n", veinid::format_summary(report).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hand-vein verification: templates, matching, synthetic data, evaluation"};
  app.require_subcommand(1);

  std::string input, output, config;
  auto* pipeline = app.add_subcommand("pipeline", "Extract a VTPL template from a PPM image");
  pipeline->add_option("--input", input, "Input PPM (P6)")->required();
  pipeline->add_option("--output", output, "Output VTPL template")->required();
  pipeline->add_option("--config", config, "Config file (key = value)");

  std::string probe, gallery;
  veinid::MatchParams mp;
  auto* match = app.add_subcommand("match", "Score a probe template against a gallery template");
  match->add_option("--probe", probe, "Probe VTPL")->required();
  match->add_option("--gallery", gallery, "Gallery VTPL")->required();
  match->add_option("--t1", mp.t1, "Distance tolerance in px")->capture_default_str();
  match->add_option("--t2", mp.t2, "Angle tolerance in degrees")->capture_default_str();
  match->add_option("--threshold", mp.decision_threshold, "Accept iff V > threshold")
      ->capture_default_str();

  std::uint64_t seed = 42;
  int identities = 50;
  int samples = 5;
  std::string outdir;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic hand-vein dataset");
  synth->add_option("--seed", seed, "Random seed")->capture_default_str();
  synth->add_option("--identities", identities, "Number of identities")->capture_default_str();
  synth->add_option("--samples", samples, "Samples per identity (first is clean)")
      ->capture_default_str();
  synth->add_option("--outdir", outdir, "Output directory")->required();

  std::string dataset, csv = "eval.csv";
  auto* eval = app.add_subcommand("eval", "Score a dataset and sweep the decision threshold");
  eval->add_option("--dataset", dataset, "Directory of id<i>_s<j>.ppm files")->required();
  eval->add_option("--config", config, "Config file (key = value)");
  eval->add_option("--csv", csv, "CSV report path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*pipeline) return cmd_pipeline(input, output, config);
    if (*match) return cmd_match(probe, gallery, mp);
    if (*synth) return cmd_synth(seed, identities, samples, outdir);
    if (*eval) return cmd_eval(dataset, config, csv);
  } catch (const veinid::DegenerateData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (*synth) std::cerr << synth->help();
    return kExitInput;
  }
  return kExitInput;
}
