#pragma once

#include "vbcalc/algebroid.hpp"
#include "vbcalc/defcomplex.hpp"
#include "vbcalc/error.hpp"
#include "vbcalc/im.hpp"
#include "vbcalc/matrix.hpp"
#include "vbcalc/parser.hpp"
#include "vbcalc/polynomial.hpp"
#include "vbcalc/polyvector.hpp"
#include "vbcalc/rational.hpp"
#include "vbcalc/report.hpp"
#include "vbcalc/vb.hpp"
