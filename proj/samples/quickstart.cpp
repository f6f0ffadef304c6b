// Generates one synthetic identity, a perturbed re-capture of it, extracts
// both templates and verifies the second against the first.

#include <cstdio>

#include "veinid/veinid.hpp"

int main() {
  const std::uint64_t seed = 7;
  const auto enrolled = veinid::dataset_sample(seed, 0, 0);
  const auto recapture = veinid::dataset_sample(seed, 0, 1);
  const auto other = veinid::dataset_sample(seed, 1, 1);

  const veinid::PipelineConfig cfg;
  const auto gallery = veinid::extract_template(enrolled.image, cfg, "enrolled");
  std::printf("enrolled: %zu forkings (%zu in ground truth)\n", gallery.size(),
              enrolled.truth.branch_points.size());

  for (const auto* probe_sample : {&recapture, &other}) {
    const auto probe = veinid::extract_template(probe_sample->image, cfg);
    const auto result = veinid::match_templates(probe, gallery, cfg.match);
    std::printf("V=%.4f decision=%s\n", result.score_v,
                veinid::to_string(veinid::verify(result, cfg.match)));
  }
}
