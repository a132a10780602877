#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clusterbandit/core/clustering.hpp"
#include "clusterbandit/core/random.hpp"

namespace clusterbandit {

// Raised when a caller breaks an operation's precondition, e.g. updating a
// cluster with an arm that is not one of its members.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ClusterChoice {
  ClusterId cluster = 0;
  ArmId arm = 0;
};

struct TreeChoice {
  std::vector<NodeId> path;  // root first, leaf last
  ArmId arm = 0;
};

// What a policy decided in one round. `path` holds the chosen cluster for
// two-level policies and the root-to-leaf node sequence for tree policies;
// flat policies leave it empty.
struct Selection {
  ArmId arm = 0;
  std::optional<ClusterId> cluster;
  std::vector<std::size_t> path;
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string_view key() const noexcept = 0;
  // t is the 1-based round index.
  virtual Selection select(std::size_t t, Rng& rng) = 0;
  virtual void update(const Selection& selection, double reward) = 0;
};

}  // namespace clusterbandit
