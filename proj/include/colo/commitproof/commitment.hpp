#pragma once

#include "colo/core/group.hpp"
#include "colo/core/ring.hpp"

namespace colo {

struct Commitment {
  GroupElement point;

  bool operator==(const Commitment& o) const { return point == o.point; }
};

struct Opening {
  RingElement value;
  Scalar randomness;
};

// g^value * h^randomness
Commitment commit(const Scalar& value, const Scalar& randomness);
Commitment commit(RingElement value, const Scalar& randomness);

bool verify_opening(const Commitment& cm, const Opening& opening);

}  // namespace colo
