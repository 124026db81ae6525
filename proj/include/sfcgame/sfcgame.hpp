#pragma once

#include "sfcgame/types.hpp"
#include "sfcgame/game_core.hpp"
#include "sfcgame/follower.hpp"
#include "sfcgame/golden_section.hpp"
#include "sfcgame/leader.hpp"
#include "sfcgame/equilibrium.hpp"
#include "sfcgame/scenario_gen.hpp"
#include "sfcgame/protocol/message.hpp"
#include "sfcgame/protocol/session.hpp"
#include "sfcgame/protocol/in_process.hpp"
