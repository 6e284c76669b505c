#pragma once

#include <array>
#include <cstdint>

namespace ssph {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every
/// output block is a pure function of (key, counter), so independent
/// streams are addressed instead of advanced.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block counter, Key key);
};

/// Stream of uniform and standard-normal draws addressed by
/// (seed, stream index). Normals use Box-Muller on the raw Philox bits so
/// results are identical across standard libraries.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  void refill();

  Philox4x32::Key key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_index_ = 0;
  Philox4x32::Block buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ssph
