// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the full-duplex phase-noise simulation library.
#ifndef FDPN_FDPN_HPP
#define FDPN_FDPN_HPP

#include "fdpn/canceller.hpp"
#include "fdpn/channel.hpp"
#include "fdpn/common.hpp"
#include "fdpn/estimator.hpp"
#include "fdpn/fft.hpp"
#include "fdpn/metrics.hpp"
#include "fdpn/ofdm.hpp"
#include "fdpn/oscillator.hpp"
#include "fdpn/sweep.hpp"

#endif
