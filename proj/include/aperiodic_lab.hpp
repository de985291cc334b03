#ifndef APERIODIC_LAB_HPP
#define APERIODIC_LAB_HPP

#include "aperiodic_lab/qnum.hpp"
#include "aperiodic_lab/point.hpp"
#include "aperiodic_lab/point_set.hpp"
#include "aperiodic_lab/generators.hpp"
#include "aperiodic_lab/embedding.hpp"
#include "aperiodic_lab/patch_engine.hpp"
#include "aperiodic_lab/covering.hpp"
#include "aperiodic_lab/repetitivity.hpp"
#include "aperiodic_lab/certificates.hpp"
#include "aperiodic_lab/analysis.hpp"
#include "aperiodic_lab/config.hpp"
#include "aperiodic_lab/display.hpp"
#include "aperiodic_lab/report.hpp"

#endif  // APERIODIC_LAB_HPP
