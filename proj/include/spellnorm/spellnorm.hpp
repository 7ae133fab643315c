#pragma once

// Umbrella header for the spellnorm toolkit.

#include "spellnorm/align.hpp"
#include "spellnorm/candidate.hpp"
#include "spellnorm/channel.hpp"
#include "spellnorm/corpus.hpp"
#include "spellnorm/curve.hpp"
#include "spellnorm/distance.hpp"
#include "spellnorm/error.hpp"
#include "spellnorm/eval.hpp"
#include "spellnorm/io.hpp"
#include "spellnorm/lookup.hpp"
#include "spellnorm/model_io.hpp"
#include "spellnorm/normalizer.hpp"
#include "spellnorm/report.hpp"
#include "spellnorm/rules.hpp"
#include "spellnorm/stemmer.hpp"
#include "spellnorm/unicode.hpp"
