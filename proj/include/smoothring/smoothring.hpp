#pragma once

#include "smoothring/error.hpp"
#include "smoothring/rational.hpp"
#include "smoothring/term.hpp"
#include "smoothring/eval.hpp"
#include "smoothring/normalize.hpp"
#include "smoothring/jet.hpp"
#include "smoothring/sexpr.hpp"
#include "smoothring/random.hpp"
#include "smoothring/generate.hpp"
#include "smoothring/verdict.hpp"
#include "smoothring/zero_set.hpp"
#include "smoothring/certificate.hpp"
#include "smoothring/presentation.hpp"
#include "smoothring/fp_rings.hpp"
#include "smoothring/site.hpp"
#include "smoothring/models.hpp"
#include "smoothring/vn.hpp"
#include "smoothring/report.hpp"
#include "smoothring/session.hpp"
