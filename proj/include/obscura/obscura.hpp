#pragma once

#include "obscura/answer.hpp"
#include "obscura/brute.hpp"
#include "obscura/catalog.hpp"
#include "obscura/check.hpp"
#include "obscura/constraint.hpp"
#include "obscura/dataset.hpp"
#include "obscura/envgen.hpp"
#include "obscura/error.hpp"
#include "obscura/metrics.hpp"
#include "obscura/oracle.hpp"
#include "obscura/parse.hpp"
#include "obscura/prompt.hpp"
#include "obscura/qgen.hpp"
#include "obscura/question.hpp"
#include "obscura/render.hpp"
#include "obscura/rng.hpp"
#include "obscura/scene.hpp"
#include "obscura/scene_io.hpp"
#include "obscura/scenegen.hpp"
#include "obscura/solver.hpp"
#include "obscura/stats.hpp"
