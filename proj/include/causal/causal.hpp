#pragma once

// Everything in one include.

#include "causal/axioms.hpp"
#include "causal/baselogic.hpp"
#include "causal/dag.hpp"
#include "causal/desugar.hpp"
#include "causal/formula.hpp"
#include "causal/graph.hpp"
#include "causal/linear.hpp"
#include "causal/parser.hpp"
#include "causal/poly.hpp"
#include "causal/proof.hpp"
#include "causal/rational.hpp"
#include "causal/realsolve.hpp"
#include "causal/sat.hpp"
#include "causal/scm.hpp"
#include "causal/scm_io.hpp"
#include "causal/semantics.hpp"
#include "causal/signature.hpp"
#include "causal/simprog.hpp"
