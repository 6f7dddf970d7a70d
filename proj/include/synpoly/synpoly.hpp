#pragma once

#include "synpoly/conllu.hpp"
#include "synpoly/dataset.hpp"
#include "synpoly/deptree.hpp"
#include "synpoly/distance.hpp"
#include "synpoly/diversity.hpp"
#include "synpoly/error.hpp"
#include "synpoly/matrices.hpp"
#include "synpoly/parallel.hpp"
#include "synpoly/polynomial.hpp"
#include "synpoly/rational.hpp"
#include "synpoly/relations.hpp"
#include "synpoly/typology.hpp"
