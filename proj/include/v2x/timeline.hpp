// Copyright 2026 The v2x-market Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef V2X_TIMELINE_HPP
#define V2X_TIMELINE_HPP

#include <span>
#include <vector>

#include "v2x/errors.hpp"

namespace v2x {

enum class BlockKind { kPeak, kValley };

// Contiguous half-hour-period range [begin, end) of one kind.
struct Block {
  BlockKind kind = BlockKind::kValley;
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool contains(int hhp) const { return hhp >= begin && hhp < end; }
  bool operator==(const Block&) const = default;
};

struct HhpRange {
  int begin = 0;
  int end = 0;

  bool operator==(const HhpRange&) const = default;
};

// The day's hhps partitioned into alternating peak and valley blocks.
// Blocks are disjoint, contiguous, cover [0, hhp_count), and alternate in
// kind; every hhp belongs to exactly one block.
class Timeline {
 public:
  Timeline() = default;

  int hhp_count() const { return hhp_count_; }
  std::span<const Block> blocks() const { return blocks_; }

  const Block& block_at(int hhp) const;
  bool is_peak(int hhp) const { return block_at(hhp).kind == BlockKind::kPeak; }

  // Peaks in day order.
  std::vector<Block> peaks() const;
  // Index into peaks() for a peak hhp, -1 for a valley hhp.
  int peak_ordinal_of(int hhp) const;

  bool operator==(const Timeline&) const = default;

  friend Timeline build_timeline(int hhp_count, std::span<const HhpRange> peak_ranges);

 private:
  int hhp_count_ = 0;
  std::vector<Block> blocks_;
};

// Builds the partition from the peak ranges; every gap becomes a valley.
// Rejects unsorted/overlapping ranges and adjacent peaks with no valley
// between them, naming the offending indices.
Timeline build_timeline(int hhp_count, std::span<const HhpRange> peak_ranges);

}  // namespace v2x

#endif  // V2X_TIMELINE_HPP
