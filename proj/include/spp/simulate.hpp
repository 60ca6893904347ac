#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spp/policy.hpp"

namespace spp {

// Counter-based generator: the stream is a pure function of (seed, stream id),
// so trials can run in any order or in parallel.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  // next() / 2^64, exactly.
  Rational unit();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace spp

namespace spp::mech {

struct TranscriptEntry {
  enum class Kind { kOffer, kQuery, kSkip };
  Kind kind = Kind::kSkip;
  std::size_t buyer = 0;
  Rational price;     // offers only
  bool accepted = false;
  Rational reported;  // queries only
};

struct Outcome {
  std::vector<int> x;
  std::vector<Rational> p;
  std::vector<TranscriptEntry> transcript;

  Rational revenue() const;
};

// One trajectory with truthful buyers that accept iff price <= value.
// Blind policies terminate immediately on off-support bids.
Outcome run_mechanism(const Policy& policy, const Valuation& v, std::uint64_t seed);

// Same, drawing from an existing generator.
Outcome run_mechanism(const Policy& policy, const Valuation& v, CounterRng& rng);

// One JSON object per entry, for line-delimited export.
std::string transcript_record(const TranscriptEntry& entry);

}  // namespace spp::mech
