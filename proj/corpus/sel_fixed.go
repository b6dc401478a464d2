package main

func selector(left chan int, right chan int, finished chan int) {
	select {
	case <-left:
	case <-right:
	}
	finished <- 1
}

func main() {
	x := make(chan int)
	y := make(chan int)
	done := make(chan int)
	go selector(x, y, done)
	go selector(x, y, done)
	x <- 1
	y <- 1
	<-done
	<-done
}
