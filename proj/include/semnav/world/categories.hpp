#pragma once

#include <array>
#include <string>

#include "semnav/core/error.hpp"

namespace semnav::world {

// Fixed category table. The first kNumGoalCategories entries are valid
// navigation goals; the rest are furniture that only ever appears as map
// context ("anchors").
inline constexpr int kNumCategories = 15;
inline constexpr int kNumGoalCategories = 6;

inline constexpr std::array<const char*, kNumCategories> kCategoryNames = {
    "chair", "couch",   "potted_plant", "bed",  "toilet",
    "tv",    "table",   "sink",         "counter", "cabinet",
    "desk",  "shelf",   "wardrobe",     "nightstand", "tv_stand",
};

enum Category : int {
  kChair = 0,
  kCouch = 1,
  kPottedPlant = 2,
  kBed = 3,
  kToilet = 4,
  kTv = 5,
  kTable = 6,
  kSink = 7,
  kCounter = 8,
  kCabinet = 9,
  kDesk = 10,
  kShelf = 11,
  kWardrobe = 12,
  kNightstand = 13,
  kTvStand = 14,
};

inline bool is_goal_category(int c) { return c >= 0 && c < kNumGoalCategories; }
inline bool is_valid_category(int c) { return c >= 0 && c < kNumCategories; }

/** Anchor category that each goal category tends to sit next to. */
inline int anchor_of(int goal) {
  switch (goal) {
    case kChair: return kTable;
    case kCouch: return kTvStand;
    case kPottedPlant: return kShelf;
    case kBed: return kNightstand;
    case kToilet: return kSink;
    case kTv: return kTvStand;
    default: throw Error("anchor_of: not a goal category");
  }
}

inline const char* category_name(int c) {
  require(is_valid_category(c), "category index out of range");
  return kCategoryNames[size_t(c)];
}

inline int category_from_name(const std::string& name) {
  for (int c = 0; c < kNumCategories; ++c)
    if (name == kCategoryNames[size_t(c)]) return c;
  throw Error("unknown category name: " + name);
}

}  // namespace semnav::world
