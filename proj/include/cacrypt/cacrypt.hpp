#pragma once

// Umbrella header for the cacrypt library.

#include "chaos_metrics.hpp"
#include "cipher.hpp"
#include "ent.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "image.hpp"
#include "keystream.hpp"
#include "rule.hpp"
#include "seeding.hpp"
