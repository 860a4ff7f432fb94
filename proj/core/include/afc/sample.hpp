#pragma once

#include <cstdint>
#include <vector>

#include "afc/family.hpp"

namespace afc {

enum class Provenance { InverseTransform, Copula, MetropolisHastings, External };

const char* provenance_name(Provenance p);

struct BivariateSample {
  std::vector<JointPoint> pairs;
  Provenance provenance = Provenance::External;

  std::size_t size() const { return pairs.size(); }
  // All coordinates strictly positive.
  void validate() const;
};

}  // namespace afc
