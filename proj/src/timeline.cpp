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

#include "v2x/timeline.hpp"

#include <string>

namespace v2x {

namespace {

std::string range_str(const HhpRange& r) {
  return "[" + std::to_string(r.begin) + "," + std::to_string(r.end) + ")";
}

}  // namespace

const Block& Timeline::block_at(int hhp) const {
  if (hhp < 0 || hhp >= hhp_count_) {
    throw Error("timeline", "hhp " + std::to_string(hhp) + " outside [0," + std::to_string(hhp_count_) + ")");
  }
  for (const Block& b : blocks_) {
    if (b.contains(hhp)) return b;
  }
  throw Error("timeline", "no block covers hhp " + std::to_string(hhp));
}

std::vector<Block> Timeline::peaks() const {
  std::vector<Block> out;
  for (const Block& b : blocks_) {
    if (b.kind == BlockKind::kPeak) out.push_back(b);
  }
  return out;
}

int Timeline::peak_ordinal_of(int hhp) const {
  int ordinal = 0;
  for (const Block& b : blocks_) {
    if (b.kind != BlockKind::kPeak) continue;
    if (b.contains(hhp)) return ordinal;
    ++ordinal;
  }
  return -1;
}

Timeline build_timeline(int hhp_count, std::span<const HhpRange> peak_ranges) {
  if (hhp_count <= 0) {
    throw Error("timeline", "hhp_count must be positive, got " + std::to_string(hhp_count));
  }
  Timeline t;
  t.hhp_count_ = hhp_count;

  int cursor = 0;
  for (std::size_t i = 0; i < peak_ranges.size(); ++i) {
    const HhpRange& r = peak_ranges[i];
    if (r.begin < 0 || r.end > hhp_count || r.begin >= r.end) {
      throw Error("timeline", "invalid peak range " + range_str(r));
    }
    if (r.begin < cursor) {
      throw Error("timeline", "peak ranges overlap or are unsorted at " + range_str(r));
    }
    if (i > 0 && r.begin == cursor) {
      throw Error("timeline", "no valley between adjacent peaks ending at " +
                                  std::to_string(cursor) + " and " + range_str(r));
    }
    if (r.begin > cursor) {
      t.blocks_.push_back(Block{BlockKind::kValley, cursor, r.begin});
    }
    t.blocks_.push_back(Block{BlockKind::kPeak, r.begin, r.end});
    cursor = r.end;
  }
  if (cursor < hhp_count) {
    t.blocks_.push_back(Block{BlockKind::kValley, cursor, hhp_count});
  }
  return t;
}

}  // namespace v2x
