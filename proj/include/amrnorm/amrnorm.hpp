#ifndef AMRNORM_AMRNORM_HPP
#define AMRNORM_AMRNORM_HPP

#include "amrnorm/corpus.hpp"
#include "amrnorm/graph.hpp"
#include "amrnorm/normalize.hpp"
#include "amrnorm/reification.hpp"
#include "amrnorm/roles.hpp"
#include "amrnorm/smatch.hpp"
#include "amrnorm/stats.hpp"
#include "amrnorm/tree.hpp"
#include "amrnorm/validate.hpp"

#endif  // AMRNORM_AMRNORM_HPP
