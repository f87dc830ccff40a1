float sum_float(float* x, int n)
{
  return sum(x, x+n, plus<float>(), 0.0f);
}
