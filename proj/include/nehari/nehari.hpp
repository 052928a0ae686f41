#pragma once

///
/// \file nehari.hpp
///
/// Umbrella header.
///

#include <nehari/core.hpp>
#include <nehari/symbol.hpp>
#include <nehari/hardy.hpp>
#include <nehari/hankel.hpp>
#include <nehari/factorize.hpp>
#include <nehari/superopt.hpp>
#include <nehari/certify.hpp>
#include <nehari/corpus.hpp>
#include <nehari/io.hpp>
