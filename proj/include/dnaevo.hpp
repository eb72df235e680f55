#pragma once

#include "dnaevo/detection.hpp"
#include "dnaevo/dna_model.hpp"
#include "dnaevo/error.hpp"
#include "dnaevo/experiment.hpp"
#include "dnaevo/genbot.hpp"
#include "dnaevo/io.hpp"
#include "dnaevo/lcs_engine.hpp"
#include "dnaevo/resampling.hpp"
#include "dnaevo/rng.hpp"
#include "dnaevo/synthetic.hpp"
