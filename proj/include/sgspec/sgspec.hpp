#pragma once

#include "sgspec/types.hpp"
#include "sgspec/matrix_exp.hpp"
#include "sgspec/semigroup.hpp"
#include "sgspec/catalog.hpp"
#include "sgspec/linalg.hpp"
#include "sgspec/spectra.hpp"
#include "sgspec/charpoly_oracle.hpp"
#include "sgspec/quadrature.hpp"
#include "sgspec/periodic.hpp"
#include "sgspec/mapping.hpp"
#include "sgspec/hardy.hpp"
#include "sgspec/io.hpp"
#include "sgspec/scenario.hpp"
