#pragma once

// Length-40 series constructed (offline, by a Newton solve over the series
// entries) so that their sample autocorrelations at lags 1..8 are EXACTLY
// c * t^-alpha to ~1e-14. They make the log-log fit's exact-recovery
// property directly assertable.

#include <vector>

namespace fixtures {

struct PowerLawSeries {
  double c;
  double alpha;
  std::vector<double> values;
};

inline const std::vector<PowerLawSeries>& power_law_series() {
  static const std::vector<PowerLawSeries> data = {
      {0.26, 0.50,
       {1.2944868851365701, -1.4478594809423557, 0.0029782528264692648,
        1.1516068402468334, -0.69281925288775381, -0.33334394602871975,
        0.75736736703155061, -0.61737437392708794, -0.25941244366493721,
        -1.8802915542107206, -0.46071356976221645, -1.2774059504351005,
        -0.044061477242880336, 0.19565237418498943, -0.043515220237888286,
        -1.663570442547663, -1.5107928235645132, 0.52426435950404748,
        -0.30833974108084861, 0.92971908338431031, 0.70384928953310388,
        2.001809229163737, 0.3459903606004876, -0.15180171563481767,
        -0.067427433118169997, 2.4410543468465296, 2.4752901900227178,
        1.1168247972090688, -0.26075170422363408, 1.2030717364483545,
        -0.69427840692464238, 0.68870202457588747, -0.34696125630870517,
        0.050174500281952396, 0.54064725302868266, -1.6430015118040067,
        -0.48191552459549314, -0.87743709101129397, -1.9782077908928355,
        -0.33823773177303307}},
      {0.5, 0.25,
       {0.057137453063206688, 1.2176016633210638, -1.4321769172719623,
        -1.2552805849961826, -0.14085904909093483, -0.35897284089994036,
        -0.84104341304470553, 0.76436097216302368, -1.0321478938189224,
        -0.96232304166135973, -2.3176312248184128, -1.4214332913649668,
        -0.32110087605363813, -1.0988519025553167, -1.4302735094623831,
        -1.0174521750857848, -1.5100443506328194, -2.0554854865798498,
        -2.2271392737391884, -1.085740308319358, -0.63963461721206716,
        -1.5033935951621922, -0.90683786484103557, -1.0936718902530214,
        0.0085876875883080898, -1.048922678692761, -0.70487125392930305,
        -1.0857774435793659, 0.45846430641244357, 0.94134644299827241,
        0.56834400246647532, 0.70137844230708191, 0.70510494822076608,
        -0.98678241354599849, 1.1496381898966617, 0.59201639931952821,
        1.1871930210022166, 0.91920608702288331, 0.25550577017753789,
        1.127318640045047}},
      {0.4, 1.0,
       {0.53948519883332891, -1.7230573206441839, 2.2501409084198172,
        1.8401085522926426, 0.52859148239108134, 1.7299345359402649,
        -0.51092044435093187, -1.6755125989911897, -3.0670458076995364,
        -2.6191081783791113, 0.09059062368886163, -0.86285292250743972,
        -0.71877603627797171, -1.4510176952144833, -1.6695607578323091,
        -1.2769942539991856, -2.7306687228454347, 0.35042244281225249,
        -0.5625701938849762, 2.140503077338352, 1.3910189621295463,
        2.425284384690106, 2.0185068293880737, 0.29013768146521424,
        -0.10758271304512919, 3.4460922168991202, 2.0021234202384424,
        1.1916867824835224, 0.42021240290116729, 0.81179354994460629,
        -0.10060724181820743, 1.4224221662633991, -0.48729016308192957,
        0.91872476522636226, -1.1622597994693564, -1.2066418884014392,
        2.6409309564925834, 2.3720420108540425, -1.3097945961860002,
        -0.88384020350342618}},
      {0.3, 2.0,
       {-0.28925420917198863, 2.8899576715898365, -0.58668341351836339,
        0.27394478002961936, 0.5941622252597526, 2.8330976450961298,
        2.1319971108766729, 2.7785771392081773, 1.057166814927603,
        -0.49419278468937894, -2.1623784082842752, 0.48931858037111708,
        1.7756685977111819, -0.46514957304130716, -0.60220983909483428,
        -0.23123335358640298, -0.032557351456852061, -2.8082255795412667,
        -2.9735897975266323, 0.13973796564706167, -0.19560823776450526,
        0.63613669228945435, 0.74924853526026824, -2.1217885054849477,
        0.8429313341247483, -0.0067013843312976242, -0.56236227993336174,
        -0.87216953745694925, 0.85805113617584727, 2.017676320056133,
        1.2494443097887884, 1.5932422927348198, 1.8454060296118784,
        -1.7896135804736535, 0.87179791653468219, 0.24450180707309654,
        -0.56921978323027012, -0.4703939420719474, -1.8879280219323598,
        -1.0996568139731051}},
  };
  return data;
}

}  // namespace fixtures
