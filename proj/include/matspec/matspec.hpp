#pragma once

#include "matspec/bernstein.hpp"
#include "matspec/csv.hpp"
#include "matspec/expint.hpp"
#include "matspec/fourier.hpp"
#include "matspec/gamma_process.hpp"
#include "matspec/hpd.hpp"
#include "matspec/hypersphere.hpp"
#include "matspec/rng.hpp"
#include "matspec/sampler.hpp"
#include "matspec/summaries.hpp"
#include "matspec/svg.hpp"
#include "matspec/varma.hpp"
#include "matspec/whittle.hpp"
