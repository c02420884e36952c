#pragma once

#include "clonescope/error.hpp"
#include "clonescope/scala_lexer.hpp"
#include "clonescope/scala_ast.hpp"
#include "clonescope/extractor.hpp"
#include "clonescope/representation.hpp"
#include "clonescope/detector.hpp"
#include "clonescope/embedder.hpp"
#include "clonescope/rae.hpp"
#include "clonescope/distance.hpp"
#include "clonescope/evaluator.hpp"
#include "clonescope/artifacts.hpp"
#include "clonescope/report.hpp"
#include "clonescope/synth.hpp"
#include "clonescope/labelsvc.hpp"
