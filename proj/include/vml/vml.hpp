#ifndef VML_VML_HPP
#define VML_VML_HPP

#include "vml/errors.hpp"
#include "vml/rng.hpp"
#include "vml/measure_core.hpp"
#include "vml/normed_space.hpp"
#include "vml/opt_engine.hpp"
#include "vml/vector_measure.hpp"
#include "vml/l1m_norm.hpp"
#include "vml/approx_nets.hpp"
#include "vml/daugavet_lab.hpp"

#endif  // VML_VML_HPP
