template<typename T, typename Iter,
  typename Op>
T sum(Iter x, Iter end, Op op,
  T unit)
{
  T s = unit;
  for (; x != end; ++x)
    s = op(s,*x);
  return s;
}
