#pragma once

#include <negser/numeric.hpp>
#include <negser/series.hpp>
#include <negser/instance.hpp>
#include <negser/theorem.hpp>
#include <negser/cn_analysis.hpp>
#include <negser/io.hpp>
#include <negser/sweep.hpp>
#include <negser/commands.hpp>
