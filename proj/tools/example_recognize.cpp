// Recognizes a Descartes folium hidden among 95% background noise.

#include <iostream>

#include "hough/hough.hpp"

int main() {
  using namespace hough;
  const auto fam = builtin("descartes_folium");
  const ParamPoint truth{3.0, 1.0};

  Rng rng(7);
  const auto n1 = static_cast<std::size_t>(nu_opt(fam));
  auto points = sample_on_curve(fam, truth, n1, rng);
  const auto noise = uniform_background(default_noise_window(fam, truth), background_count(n1, 95), rng);
  points.insert(points.end(), noise.begin(), noise.end());

  const auto out = recognize(fam, points, build_grid(fam), truth);
  std::cout << points.size() << " points, estimate (" << out.estimate[0] << ", " << out.estimate[1]
            << "), " << out.votes << " votes, " << (out.exact ? "exact" : "missed") << '\n';
}
