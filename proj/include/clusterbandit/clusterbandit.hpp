#pragma once

#include "clusterbandit/core/beta_belief.hpp"
#include "clusterbandit/core/clustering.hpp"
#include "clusterbandit/core/errors.hpp"
#include "clusterbandit/core/instance.hpp"
#include "clusterbandit/core/random.hpp"
#include "clusterbandit/core/trace.hpp"

#include "clusterbandit/policies/factory.hpp"
#include "clusterbandit/policies/policy.hpp"
#include "clusterbandit/policies/thompson.hpp"
#include "clusterbandit/policies/ucb.hpp"

#include "clusterbandit/contextual/instance.hpp"
#include "clusterbandit/contextual/linear_belief.hpp"
#include "clusterbandit/contextual/policies.hpp"

#include "clusterbandit/instances/agglomerative.hpp"
#include "clusterbandit/instances/generators.hpp"
#include "clusterbandit/instances/kmeans.hpp"
#include "clusterbandit/instances/reward_functions.hpp"
#include "clusterbandit/instances/spec.hpp"

#include "clusterbandit/analysis/aggregate.hpp"
#include "clusterbandit/analysis/bounds.hpp"
#include "clusterbandit/analysis/cluster_stats.hpp"
#include "clusterbandit/analysis/kl.hpp"

#include "clusterbandit/harness/config.hpp"
#include "clusterbandit/harness/export.hpp"
#include "clusterbandit/harness/presets.hpp"
#include "clusterbandit/harness/runner.hpp"
#include "clusterbandit/harness/simulate.hpp"
