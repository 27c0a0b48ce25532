#pragma once

#include "inccalc/assign.hpp"
#include "inccalc/error.hpp"
#include "inccalc/evaluate.hpp"
#include "inccalc/formula.hpp"
#include "inccalc/knowledge_base.hpp"
#include "inccalc/laf.hpp"
#include "inccalc/probability.hpp"
#include "inccalc/random.hpp"
#include "inccalc/rational.hpp"
#include "inccalc/sample_space.hpp"
