#pragma once

#include "gedwalk/errors.hpp"
#include "gedwalk/features.hpp"
#include "gedwalk/generators.hpp"
#include "gedwalk/graph.hpp"
#include "gedwalk/io.hpp"
#include "gedwalk/maximizer.hpp"
#include "gedwalk/parallel.hpp"
#include "gedwalk/walk_engine.hpp"
