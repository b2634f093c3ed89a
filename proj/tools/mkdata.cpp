// rnnd-mkdata: write deterministic synthetic vectors, for scripted tests and
// quick experiments.

#include <cstdio>

#include <CLI11.hpp>

#include "rnnd/common.hpp"
#include "rnnd/vector_store.hpp"

int main(int argc, char** argv) {
  CLI::App app{"write deterministic synthetic vectors as fvecs"};
  size_t n = 1000, d = 16, latent = 0;
  uint64_t seed = rnnd::kDefaultSeed;
  std::string out;
  app.add_option("--n", n, "vector count")->check(CLI::Range(1, 1 << 28))
      ->capture_default_str();
  app.add_option("--d", d, "dimension")->check(CLI::Range(1, 1 << 16))
      ->capture_default_str();
  app.add_option("--latent", latent,
                 "intrinsic dimension; 0 = plain uniform [0,1)^d")
      ->capture_default_str();
  app.add_option("--seed", seed, "PRNG seed")->capture_default_str();
  app.add_option("--out", out, "output fvecs path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  try {
    auto store = latent ? rnnd::synth_lowdim(n, d, latent, seed)
                        : rnnd::synth_uniform(n, d, seed);
    rnnd::write_fvecs(store, out);
    std::printf("n=%zu d=%zu latent=%zu seed=%llu out=%s\n", n, d, latent,
                static_cast<unsigned long long>(seed), out.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
