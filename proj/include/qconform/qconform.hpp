#ifndef QCONFORM_QCONFORM_HPP
#define QCONFORM_QCONFORM_HPP

// Umbrella header.

#include "qconform/special_functions.hpp"
#include "qconform/distributions.hpp"
#include "qconform/prior.hpp"
#include "qconform/plans.hpp"
#include "qconform/conformity.hpp"
#include "qconform/oracle.hpp"

#endif // QCONFORM_QCONFORM_HPP
