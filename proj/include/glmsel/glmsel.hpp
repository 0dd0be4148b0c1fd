#ifndef GLMSEL_GLMSEL_HPP
#define GLMSEL_GLMSEL_HPP

#include "glmsel/numerics/linalg.hpp"
#include "glmsel/numerics/random.hpp"
#include "glmsel/numerics/special.hpp"
#include "glmsel/family.hpp"
#include "glmsel/estimation.hpp"
#include "glmsel/selection.hpp"
#include "glmsel/simulate.hpp"
#include "glmsel/asymptotics.hpp"

#endif  // GLMSEL_GLMSEL_HPP
