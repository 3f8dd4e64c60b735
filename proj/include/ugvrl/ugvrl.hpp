#pragma once

#include "ugvrl/core/domain.hpp"
#include "ugvrl/core/errors.hpp"
#include "ugvrl/core/random.hpp"
#include "ugvrl/core/reward.hpp"
#include "ugvrl/core/scenario.hpp"
#include "ugvrl/env/simple_env.hpp"
#include "ugvrl/agents/selection.hpp"
#include "ugvrl/agents/qlearning.hpp"
#include "ugvrl/agents/mlp.hpp"
#include "ugvrl/agents/replay_buffer.hpp"
#include "ugvrl/agents/dqn.hpp"
#include "ugvrl/agents/policy.hpp"
#include "ugvrl/integrated/topic_bus.hpp"
#include "ugvrl/integrated/vehicle.hpp"
#include "ugvrl/integrated/clock.hpp"
#include "ugvrl/integrated/mission.hpp"
#include "ugvrl/harness/model_file.hpp"
#include "ugvrl/harness/report.hpp"
#include "ugvrl/harness/commands.hpp"
