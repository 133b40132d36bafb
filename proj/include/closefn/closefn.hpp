#pragma once

#include "closefn/calculus.hpp"
#include "closefn/certificates.hpp"
#include "closefn/checks.hpp"
#include "closefn/closeness.hpp"
#include "closefn/corpus.hpp"
#include "closefn/domain.hpp"
#include "closefn/erm.hpp"
#include "closefn/error.hpp"
#include "closefn/functions.hpp"
#include "closefn/localization.hpp"
#include "closefn/online.hpp"
#include "closefn/oracle.hpp"
#include "closefn/parallel.hpp"
#include "closefn/report.hpp"
#include "closefn/rng.hpp"
#include "closefn/serialize.hpp"
