#pragma once

#include "idt/config.hpp"
#include "idt/constructions.hpp"
#include "idt/fields.hpp"
#include "idt/kernels.hpp"
#include "idt/levy.hpp"
#include "idt/linalg.hpp"
#include "idt/measure.hpp"
#include "idt/quadrature.hpp"
#include "idt/rng.hpp"
#include "idt/sheet.hpp"
#include "idt/suites.hpp"
#include "idt/verify.hpp"
